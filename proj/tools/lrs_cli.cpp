// lrs: generate, solve, exact, emit-ilp, bench and latency subcommands.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrs/aco.hpp"
#include "lrs/bench.hpp"
#include "lrs/brkga.hpp"
#include "lrs/core.hpp"
#include "lrs/exact.hpp"
#include "lrs/instgen.hpp"

namespace fs = std::filesystem;

namespace {

struct SolverOptions {
    lrs::AlgorithmConfig algo;
    std::string time_limit = "auto";
    std::uint64_t seed = 1;
    std::string budget_unit = "seconds";
    unsigned jobs = 1;
    std::size_t max_generations = 0;
    std::size_t max_iterations = 0;
};

void add_solver_options(CLI::App *cmd, SolverOptions &o) {
    auto &b = o.algo.brkga;
    auto &a = o.algo.aco;
    cmd->add_option("--time-limit", o.time_limit, "seconds per run, or 'auto' for n/10")->capture_default_str();
    cmd->add_option("--seed", o.seed, "root random seed")->capture_default_str();
    cmd->add_option("--budget-unit", o.budget_unit, "seconds | evaluations")
        ->check(CLI::IsMember({"seconds", "evaluations"}))
        ->capture_default_str();
    cmd->add_option("--jobs", o.jobs, "parallel workers")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--pop-size", b.pop_size, "BRKGA population size")->capture_default_str();
    cmd->add_option("--prop-elite", b.prop_elite, "BRKGA elite proportion")->capture_default_str();
    cmd->add_option("--prop-mutant", b.prop_mutant, "BRKGA mutant proportion")->capture_default_str();
    cmd->add_option("--p-elite", b.p_elite, "BRKGA elite inheritance probability")->capture_default_str();
    cmd->add_option("--max-generations", o.max_generations, "BRKGA generation cap (0 = none)");
    cmd->add_option("--ants", a.n_ants, "ACO constructions per iteration")->capture_default_str();
    cmd->add_option("--learning-rate", a.learning_rate, "ACO pheromone learning rate")->capture_default_str();
    cmd->add_option("--d-rate", a.d_rate, "ACO determinism rate")->capture_default_str();
    cmd->add_option("--max-iterations", o.max_iterations, "ACO iteration cap (0 = none)");
}

lrs::AlgorithmConfig finalize(SolverOptions o) {
    if (o.max_generations > 0) o.algo.brkga.max_generations = o.max_generations;
    if (o.max_iterations > 0) o.algo.aco.max_iterations = o.max_iterations;
    o.algo.brkga.jobs = o.jobs;
    o.algo.aco.jobs = o.jobs;
    lrs::check_algorithm_name(o.algo.name);
    o.algo.brkga.validate();
    o.algo.aco.validate();
    return o.algo;
}

std::string join(const std::vector<lrs::RunIndex> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<std::string> expand_instances(const std::vector<std::string> &paths) {
    std::vector<std::string> files;
    for (const auto &p : paths) {
        if (fs::is_directory(p)) {
            std::vector<std::string> in_dir;
            for (const auto &entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                    in_dir.push_back(entry.path().string());
                }
            }
            std::sort(in_dir.begin(), in_dir.end());
            files.insert(files.end(), in_dir.begin(), in_dir.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

std::vector<lrs::BenchInstance> load_instances(const std::vector<std::string> &paths) {
    std::vector<lrs::BenchInstance> out;
    for (const auto &f : expand_instances(paths)) {
        out.push_back({fs::path(f).filename().string(), lrs::read_instance(f)});
    }
    return out;
}

int cmd_generate(const lrs::GenSpec &spec, const std::string &out_dir) {
    nlohmann::json cfg{{"command", "generate"}, {"lengths", spec.lengths}, {"alphabet_sizes", spec.alphabet_sizes},
                       {"count", spec.count_per_cell}, {"seed", spec.seed}, {"out", out_dir}};
    std::cout << "config: " << cfg.dump() << "\n";
    auto files = lrs::generate(spec, out_dir);
    std::cout << "wrote " << files.size() << " instances to " << out_dir << "\n";
    return 0;
}

int cmd_solve(const SolverOptions &opts, const std::string &instance_path, const std::string &out_dir) {
    auto algo = finalize(opts);
    auto instance = lrs::read_instance(instance_path);
    auto limits = lrs::TimeLimitPolicy::parse(opts.time_limit);
    lrs::ExperimentOptions eo{limits, opts.seed, lrs::parse_budget_unit(opts.budget_unit), 1};
    const double limit = limits.limit_for(instance.n());

    auto cfg = lrs::config_json(algo);
    cfg["command"] = "solve";
    cfg["instance"] = instance_path;
    cfg["n"] = instance.n();
    cfg["sigma"] = instance.sigma();
    cfg["m"] = instance.m();
    cfg["seed"] = opts.seed;
    cfg["time_limit"] = limit;
    cfg["budget_unit"] = opts.budget_unit;
    std::cout << "config: " << cfg.dump() << "\n" << std::flush;

    lrs::BenchInstance bi{fs::path(instance_path).filename().string(), std::move(instance)};
    auto rec = lrs::run_single(bi, algo, limit, opts.seed, eo.budget_unit);
    if (!rec.ok()) {
        std::cerr << "error: " << rec.error << "\n";
        return 1;
    }
    if (!out_dir.empty()) {
        lrs::write_experiment(out_dir, {rec}, {algo}, eo);
    }
    std::cout << "objective: " << *rec.objective << "\n";
    std::cout << "selection: " << join(rec.selected) << "\n";
    std::cout << fmt::format("time_to_best: {:.6f}\n", rec.time_to_best);
    if (!rec.trajectory.empty()) {
        std::cout << fmt::format("signature: {:016x}\n", rec.trajectory.back().signature);
    }
    return 0;
}

int cmd_exact(const std::string &instance_path, std::size_t max_runs) {
    auto instance = lrs::read_instance(instance_path);
    nlohmann::json cfg{{"command", "exact"}, {"method", "brute-force"}, {"instance", instance_path},
                       {"n", instance.n()}, {"m", instance.m()}, {"max_runs", max_runs}};
    std::cout << "config: " << cfg.dump() << "\n";
    auto best = lrs::brute_force(instance, max_runs);
    std::cout << "objective: " << best.objective << "\n";
    std::cout << "selection: " << join(best.selected) << "\n";
    std::string spelled;
    for (auto i : best.selected) {
        const auto &r = instance.run(i);
        for (std::int64_t k = 0; k < r.length; ++k) spelled += instance.alphabet()[r.symbol];
    }
    std::cout << "subsequence: " << spelled << "\n";
    return 0;
}

int cmd_emit_ilp(const std::string &instance_path, const std::string &out_dir) {
    auto instance = lrs::read_instance(instance_path);
    auto model = lrs::emit_ilp(instance);
    fs::create_directories(out_dir);
    auto path = fs::path(out_dir) / (fs::path(instance_path).stem().string() + ".lp");
    lrs::write_text(path, lrs::to_lp(model));
    std::cout << "wrote " << path.string() << " (" << model.num_vars << " variables, " << model.constraints.size()
              << " constraints)\n";
    return 0;
}

int cmd_bench(const SolverOptions &opts, const std::vector<std::string> &algos,
              const std::vector<std::string> &paths, const std::string &out_dir) {
    auto base = finalize(opts);
    std::vector<lrs::AlgorithmConfig> configs;
    for (const auto &name : algos) {
        auto c = base;
        c.name = name;
        lrs::check_algorithm_name(name);
        configs.push_back(c);
    }
    auto instances = load_instances(paths);
    lrs::ExperimentOptions eo{lrs::TimeLimitPolicy::parse(opts.time_limit), opts.seed,
                              lrs::parse_budget_unit(opts.budget_unit), opts.jobs};
    // Solver-internal parallelism stays off; jobs distributes whole runs.
    for (auto &c : configs) {
        c.brkga.jobs = 1;
        c.aco.jobs = 1;
    }
    nlohmann::json cfg{{"command", "bench"}, {"instances", instances.size()}, {"seed", opts.seed},
                       {"time_limit", opts.time_limit}, {"budget_unit", opts.budget_unit}, {"jobs", opts.jobs}};
    cfg["algorithms"] = nlohmann::json::array();
    for (const auto &c : configs) cfg["algorithms"].push_back(lrs::config_json(c));
    std::cout << "config: " << cfg.dump() << "\n" << std::flush;

    auto records = lrs::run_experiment(instances, configs, eo);
    lrs::write_experiment(out_dir, records, configs, eo);
    std::cout << lrs::format_summary(lrs::aggregate(records));
    try {
        auto ranks = lrs::average_ranks(records);
        std::string text = "algo\tmean_rank\n";
        for (const auto &[a, r] : ranks) text += fmt::format("{}\t{:.4f}\n", a, r);
        lrs::write_text(fs::path(out_dir) / "ranks.tsv", text);
        std::cout << text;
    } catch (const lrs::InputError &e) {
        std::cerr << "ranks skipped: " << e.what() << "\n";
    }
    return 0;
}

int cmd_latency(const std::vector<std::string> &paths, std::size_t samples, std::uint64_t seed,
                const std::string &out_file) {
    nlohmann::json cfg{{"command", "latency"}, {"samples", samples}, {"seed", seed}};
    std::cout << "config: " << cfg.dump() << "\n";
    std::string table = "instance\tn\tsigma\tm\tsamples\tmin_ms\tmean_ms\tmedian_ms\tp99_ms\tmax_ms\n";
    for (const auto &f : expand_instances(paths)) {
        auto instance = lrs::read_instance(f);
        auto s = lrs::measure_decode_latency(instance, samples, seed);
        table += fmt::format("{}\t{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\n",
                             fs::path(f).filename().string(), instance.n(), instance.sigma(), instance.m(), samples,
                             s.min_ms, s.mean_ms, s.median_ms, s.p99_ms, s.max_ms);
    }
    std::cout << table;
    if (!out_file.empty()) lrs::write_text(out_file, table);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Longest run subsequence solvers and benchmark harness"};
    app.require_subcommand(1, 1);

    lrs::GenSpec gen;
    std::string gen_out = "instances";
    auto *generate = app.add_subcommand("generate", "write uniform random benchmark instances");
    generate->add_option("--out", gen_out, "output directory")->capture_default_str();
    generate->add_option("--lengths", gen.lengths, "string lengths")->delimiter(',')->capture_default_str();
    generate->add_option("--alphabet-sizes", gen.alphabet_sizes, "alphabet sizes")->delimiter(',')->capture_default_str();
    generate->add_option("--count", gen.count_per_cell, "instances per (length, alphabet) cell")->capture_default_str();
    generate->add_option("--seed", gen.seed, "generator seed")->capture_default_str();

    SolverOptions solve_opts;
    std::string solve_instance;
    std::string solve_out;
    auto *solve = app.add_subcommand("solve", "run BRKGA or ACO on one instance");
    solve->add_option("--algo", solve_opts.algo.name, "brkga | aco")
        ->check(CLI::IsMember({"brkga", "aco"}))
        ->capture_default_str();
    solve->add_option("--instance", solve_instance, "instance file")->required();
    solve->add_option("--out", solve_out, "directory for results.tsv, trajectories/ and manifest.json");
    add_solver_options(solve, solve_opts);

    std::string exact_instance;
    bool exact_brute = false;
    std::size_t max_runs = lrs::kDefaultBruteForceRuns;
    auto *exact = app.add_subcommand("exact", "solve small instances exactly");
    exact->add_flag("--brute-force", exact_brute, "enumerate all subsets of runs");
    exact->add_option("--instance", exact_instance, "instance file")->required();
    exact->add_option("--max-runs", max_runs, "refuse instances with more runs")->capture_default_str();

    std::string ilp_instance;
    std::string ilp_out = ".";
    auto *emit = app.add_subcommand("emit-ilp", "write the integer linear model as <stem>.lp");
    emit->add_option("--instance", ilp_instance, "instance file")->required();
    emit->add_option("--out", ilp_out, "output directory")->capture_default_str();

    SolverOptions bench_opts;
    std::vector<std::string> bench_algos{"brkga", "aco"};
    std::vector<std::string> bench_instances;
    std::string bench_out = "bench-out";
    auto *bench = app.add_subcommand("bench", "run every algorithm on every instance");
    bench->add_option("--instances", bench_instances, "instance files or directories")->required();
    bench->add_option("--algos", bench_algos, "algorithms")->delimiter(',')->capture_default_str();
    bench->add_option("--out", bench_out, "output directory")->capture_default_str();
    add_solver_options(bench, bench_opts);

    std::vector<std::string> lat_instances;
    std::size_t lat_samples = 100;
    std::uint64_t lat_seed = 1;
    std::string lat_out;
    auto *latency = app.add_subcommand("latency", "time random individual evaluations");
    latency->add_option("--instances", lat_instances, "instance files or directories")->required();
    latency->add_option("--samples", lat_samples, "evaluations per instance")->check(CLI::PositiveNumber)->capture_default_str();
    latency->add_option("--seed", lat_seed, "seed for the random individuals")->capture_default_str();
    latency->add_option("--out", lat_out, "optional tab-separated output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) return cmd_generate(gen, gen_out);
        if (*solve) return cmd_solve(solve_opts, solve_instance, solve_out);
        if (*exact) {
            if (!exact_brute) {
                std::cerr << "error: choose an exact method (--brute-force)\n";
                return 2;
            }
            return cmd_exact(exact_instance, max_runs);
        }
        if (*emit) return cmd_emit_ilp(ilp_instance, ilp_out);
        if (*bench) return cmd_bench(bench_opts, bench_algos, bench_instances, bench_out);
        if (*latency) return cmd_latency(lat_instances, lat_samples, lat_seed, lat_out);
    } catch (const lrs::IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

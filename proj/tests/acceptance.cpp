// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli_runner.hpp"
#include "lrs/aco.hpp"
#include "lrs/bench.hpp"
#include "lrs/brkga.hpp"
#include "lrs/decoder.hpp"
#include "lrs/exact.hpp"
#include "lrs/instgen.hpp"
#include "oracles.hpp"

using namespace lrs;
using lrs::testing::read_file;
using lrs::testing::run_cli;
using lrs::testing::write_file;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path work_dir(const std::string &name) {
    auto dir = fs::temp_directory_path() / ("lrs_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Objective parse_objective(const std::string &output) {
    auto pos = output.find("objective: ");
    if (pos == std::string::npos) return -1;
    return std::stoll(output.substr(pos + 11));
}

Outcome worked_example() {
    auto dir = work_dir("c1");
    write_file(dir / "aggcact.txt", "AGGCACT\n");
    const auto file = (dir / "aggcact.txt").string();

    auto t0 = Clock::now();
    auto exact = run_cli("exact --brute-force --instance " + file);
    const double exact_time = seconds_since(t0);
    t0 = Clock::now();
    auto solve = run_cli("solve --algo brkga --time-limit 0.5 --instance " + file);
    const double solve_time = seconds_since(t0);

    const auto exact_obj = parse_objective(exact.output);
    const auto solve_obj = parse_objective(solve.output);
    fs::remove_all(dir);
    return {exact.exit_code == 0 && solve.exit_code == 0 && exact_obj == 6 && solve_obj == 6 && exact_time < 1.0 &&
                solve_time < 1.0,
            fmt::format("exact={} ({:.3f}s), brkga={} ({:.3f}s)", exact_obj, exact_time, solve_obj, solve_time)};
}

Outcome decoder_equivalence() {
    auto t0 = Clock::now();
    Rng rng(2001);
    std::size_t instances = 0;
    std::size_t permutations = 0;
    std::size_t mismatches = 0;
    DecodeScratch scratch;
    for (std::size_t m = 0; m <= 8; ++m) {
        std::vector<std::string> words;
        oracle::canonical_run_words(m, m, words);
        for (const auto &w : words) {
            std::string raw;
            for (char c : w) raw.append(1 + rng.below(3), c);
            auto inst = decompose(raw, "abcdefgh");
            ++instances;
            Permutation sigma(m);
            for (std::size_t i = 0; i < m; ++i) sigma[i] = static_cast<RunIndex>(i + 1);
            do {
                ++permutations;
                mismatches += !(decode(sigma, inst, scratch) == oracle::decode_reference(sigma, inst));
            } while (std::next_permutation(sigma.begin(), sigma.end()));
        }
    }
    const double exhaustive_time = seconds_since(t0);

    std::size_t random_mismatches = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        auto inst = oracle::random_text(rng, 1 + rng.below(2000), 1 + rng.below(32));
        auto sigma = oracle::random_permutation(rng, inst.m());
        random_mismatches += !(decode(sigma, inst, scratch) == oracle::decode_reference(sigma, inst));
    }
    const double total = seconds_since(t0);
    return {mismatches == 0 && random_mismatches == 0 && total < 300.0,
            fmt::format("exhaustive: {} instances, {} permutations, {} mismatches ({:.1f}s); random: 10000 pairs, "
                        "{} mismatches; total {:.1f}s",
                        instances, permutations, mismatches, exhaustive_time, random_mismatches, total)};
}

Outcome decoder_soundness() {
    Rng rng(3003);
    DecodeScratch scratch;
    std::size_t violations = 0;
    for (int trial = 0; trial < 100000; ++trial) {
        auto inst = oracle::random_text(rng, 1 + rng.below(300), 1 + rng.below(32));
        Individual ind = random_individual(inst.m(), rng);
        auto s = evaluate(ind, inst, scratch);
        if (!is_valid(s.selected, inst) || !oracle::is_valid_pairwise(s.selected, inst) ||
            s.objective != objective(s.selected, inst)) {
            ++violations;
        }
    }
    return {violations == 0, fmt::format("100000 decodes, {} violations", violations)};
}

Outcome ilp_model() {
    auto t0 = Clock::now();
    Rng rng(4004);
    std::size_t set_mismatches = 0;
    std::size_t optimum_mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = rng.below(13);
        auto inst = oracle::random_with_runs(rng, m, 2 + rng.below(4));
        auto model = parse_lp(to_lp(emit_ilp(inst)));
        std::vector<int> x(m + 1, 0);
        Objective model_best = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            for (std::size_t i = 0; i < m; ++i) x[i + 1] = static_cast<int>(mask >> i & 1U);
            const bool feasible = satisfies(model, x);
            set_mismatches += feasible != oracle::is_valid_pairwise(oracle::mask_to_selection(mask, m), inst);
            if (feasible) model_best = std::max(model_best, model_objective(model, x));
        }
        optimum_mismatches += model_best != brute_force(inst).objective;
    }
    const double took = seconds_since(t0);
    return {set_mismatches == 0 && optimum_mismatches == 0 && took < 300.0,
            fmt::format("200 instances: {} assignment mismatches, {} optimum mismatches ({:.1f}s)", set_mismatches,
                        optimum_mismatches, took)};
}

Outcome small_optimality() {
    Rng rng(5005);
    int brkga_hits = 0;
    int aco_hits = 0;
    double brkga_slowest = 0.0;
    double aco_slowest = 0.0;
    for (int run = 0; run < 100; ++run) {
        const std::size_t n = 20 + rng.below(21);
        const std::size_t sigma = 2 + rng.below(3);
        auto inst = random_instance(n, sigma, 5005, static_cast<std::size_t>(run + 1));
        Objective best = oracle::optimum_by_letter_states(inst);
        if (inst.m() <= kDefaultBruteForceRuns && brute_force(inst).objective != best) {
            return {false, "exact oracles disagree"};
        }
        BrkgaParams bp;
        bp.seed = static_cast<std::uint64_t>(run + 1);
        bp.time_limit = 2.0;
        bp.target_objective = best;
        auto b = run_brkga(inst, bp);
        brkga_hits += b.best.objective == best;
        brkga_slowest = std::max(brkga_slowest, b.time_to_best);

        AcoParams ap;
        ap.seed = static_cast<std::uint64_t>(run + 1);
        ap.time_limit = 2.0;
        ap.target_objective = best;
        auto a = run_aco(inst, ap);
        aco_hits += a.best.objective == best;
        aco_slowest = std::max(aco_slowest, a.time_to_best);
    }
    return {brkga_hits >= 95 && aco_hits >= 90,
            fmt::format("brkga {}/100 (slowest hit {:.3f}s), aco {}/100 (slowest {:.3f}s)", brkga_hits,
                        brkga_slowest, aco_hits, aco_slowest)};
}

Outcome decode_latency() {
    auto inst = random_instance(5000, 32, 6006);
    auto s = measure_decode_latency(inst, 100, 6006);
    return {s.mean_ms < 1.0 && s.p99_ms < 5.0,
            fmt::format("n=5000 sigma=32 m={}: mean {:.4f} ms, p99 {:.4f} ms", inst.m(), s.mean_ms, s.p99_ms)};
}

Outcome table_trend() {
    struct Cell {
        std::size_t n;
        std::size_t sigma;
    };
    const std::vector<Cell> cells{{100, 2}, {1000, 16}, {1000, 32}};
    const std::vector<double> fractions{0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
    AlgorithmConfig brkga;
    brkga.name = "brkga";
    AlgorithmConfig aco;
    aco.name = "aco";
    ExperimentOptions options;  // n/10 seconds, jobs = 1
    options.seed = 7;

    bool a_pass = false;
    bool b_pass = true;
    bool c_pass = true;
    std::string detail;
    for (const auto &cell : cells) {
        std::vector<BenchInstance> instances;
        for (std::size_t k = 1; k <= 10; ++k) {
            instances.push_back({instance_file_name(cell.n, cell.sigma, k), random_instance(cell.n, cell.sigma, 7007, k)});
        }
        auto records = run_experiment(instances, {brkga, aco}, options);
        double brkga_sum = 0.0;
        double aco_sum = 0.0;
        int equal = 0;
        std::vector<double> curve(fractions.size(), 0.0);
        for (std::size_t i = 0; i < instances.size(); ++i) {
            const auto &b = records[2 * i];
            const auto &a = records[2 * i + 1];
            if (!b.ok() || !a.ok()) return {false, "run failed: " + b.error + a.error};
            brkga_sum += static_cast<double>(*b.objective);
            aco_sum += static_cast<double>(*a.objective);
            equal += *b.objective == *a.objective;
            for (std::size_t f = 0; f < fractions.size(); ++f) {
                curve[f] += static_cast<double>(best_at(b.trajectory, fractions[f] * b.time_limit)) / 10.0;
            }
        }
        std::string curve_text;
        for (std::size_t f = 0; f < curve.size(); ++f) {
            curve_text += fmt::format("{}{:.1f}", f ? " " : "", curve[f]);
            if (f > 0 && curve[f] < curve[f - 1]) c_pass = false;
        }
        detail += fmt::format(" [n={} sigma={}: brkga {:.2f}, aco {:.2f}, equal {}/10, brkga curve {}]", cell.n,
                              cell.sigma, brkga_sum / 10.0, aco_sum / 10.0, equal, curve_text);
        if (cell.n == 100) a_pass = equal >= 9;
        if (cell.n == 1000) b_pass = b_pass && brkga_sum > aco_sum;
    }
    return {a_pass && b_pass && c_pass,
            fmt::format("(a) {} (b) {} (c) {};{}", a_pass ? "ok" : "fail", b_pass ? "ok" : "fail",
                        c_pass ? "ok" : "fail", detail)};
}

Outcome crossover_bias() {
    Individual elite{std::vector<double>(100000, 1.0), {}};
    Individual other{std::vector<double>(100000, 0.0), {}};
    Rng rng(8008);
    auto child = crossover(elite, other, 0.69, rng);
    std::size_t inherited = 0;
    for (double k : child.keys) inherited += k == 1.0;
    const double fraction = static_cast<double>(inherited) / 100000.0;
    return {fraction >= 0.68 && fraction <= 0.70, fmt::format("elite fraction {:.5f}", fraction)};
}

bool same_tree(const fs::path &a, const fs::path &b, std::size_t &files) {
    std::set<std::string> names;
    for (const auto &e : fs::recursive_directory_iterator(a)) {
        if (e.is_regular_file()) names.insert(fs::relative(e.path(), a).string());
    }
    for (const auto &e : fs::recursive_directory_iterator(b)) {
        if (e.is_regular_file()) names.insert(fs::relative(e.path(), b).string());
    }
    for (const auto &n : names) {
        if (!fs::exists(a / n) || !fs::exists(b / n) || read_file(a / n) != read_file(b / n)) return false;
    }
    files += names.size();
    return true;
}

Outcome determinism() {
    auto dir = work_dir("c9");
    fs::create_directories(dir / "inst");
    write_instance((dir / "inst" / "d1.txt").string(), random_instance(500, 8, 9009, 1));
    write_instance((dir / "inst" / "d2.txt").string(), random_instance(300, 4, 9009, 2));
    const std::string common = " --budget-unit evaluations --time-limit 5000 --seed 13 --jobs 1";
    bool identical = true;
    std::size_t files = 0;
    for (std::string algo : {"brkga", "aco"}) {
        for (int rep = 0; rep < 2; ++rep) {
            auto r = run_cli("solve --algo " + algo + common + " --instance " + (dir / "inst" / "d1.txt").string() +
                             " --out " + (dir / fmt::format("{}{}", algo, rep)).string());
            if (r.exit_code != 0) return {false, "solve failed: " + r.output};
        }
        identical = identical && same_tree(dir / (algo + "0"), dir / (algo + "1"), files);
    }
    for (int rep = 0; rep < 2; ++rep) {
        auto r = run_cli("bench" + common + " --instances " + (dir / "inst").string() + " --out " +
                         (dir / fmt::format("bench{}", rep)).string());
        if (r.exit_code != 0) return {false, "bench failed: " + r.output};
    }
    identical = identical && same_tree(dir / "bench0", dir / "bench1", files);
    fs::remove_all(dir);
    return {identical, fmt::format("{} files compared across repeated solve and bench runs", files)};
}

Outcome generator_scale() {
    auto dir = work_dir("c10");
    auto t0 = Clock::now();
    auto written = generate(GenSpec{}, dir);
    const double gen_time = seconds_since(t0);
    std::size_t on_disk = 0;
    std::size_t parsed = 0;
    for (const auto &e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".txt") continue;
        ++on_disk;
        try {
            read_instance(e.path().string());
            ++parsed;
        } catch (const std::exception &) {
        }
    }
    fs::remove_all(dir);
    return {written.size() == 1050 && on_disk == 1050 && parsed == 1050 && gen_time < 60.0,
            fmt::format("{} files written, {} on disk, {} parsed, {:.2f}s", written.size(), on_disk, parsed,
                        gen_time)};
}

}  // namespace

int main(int argc, char **argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"worked-example optimum", worked_example},
        {"decoder equivalence", decoder_equivalence},
        {"decoder soundness", decoder_soundness},
        {"ILP model correctness", ilp_model},
        {"small-instance optimality", small_optimality},
        {"decode latency", decode_latency},
        {"benchmark trends", table_trend},
        {"crossover bias", crossover_bias},
        {"determinism", determinism},
        {"generator scale", generator_scale},
    };
    std::set<std::size_t> selected;
    for (int i = 1; i < argc; ++i) selected.insert(static_cast<std::size_t>(std::stoul(argv[i])));

    int failures = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        if (!selected.empty() && !selected.count(c + 1)) continue;
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[c].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << fmt::format("criterion {:2}: {} {} ({:.1f}s) {}\n", c + 1, o.pass ? "PASS" : "FAIL",
                                 criteria[c].first, seconds_since(t0), o.detail)
                  << std::flush;
    }
    return failures == 0 ? 0 : 1;
}

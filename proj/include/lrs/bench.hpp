#pragma once

// Experiment harness: per-instance runs under n/10 second limits, result and
// trajectory files, per-cell summaries, average ranks and decode latency.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "lrs/aco.hpp"
#include "lrs/brkga.hpp"
#include "lrs/core.hpp"
#include "lrs/decoder.hpp"
#include "lrs/rng.hpp"
#include "lrs/trajectory.hpp"

namespace lrs {

/// Solver selector plus parameters for both solvers; only the selected one is used.
struct AlgorithmConfig {
    std::string name = "brkga";  // "brkga" | "aco"
    BrkgaParams brkga;
    AcoParams aco;
};

inline void check_algorithm_name(const std::string &name) {
    if (name != "brkga" && name != "aco") {
        throw InputError("unknown algorithm '" + name + "' (expected brkga or aco)");
    }
}

/// Either a fixed limit or n/10 (the benchmark protocol).
struct TimeLimitPolicy {
    std::optional<double> fixed;

    [[nodiscard]] double limit_for(std::size_t n) const {
        if (fixed) return *fixed;
        return std::max(static_cast<double>(n) / 10.0, 0.1);
    }

    static TimeLimitPolicy parse(const std::string &text) {
        if (text == "auto") return {};
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(text, &used);
            if (used != text.size()) throw InputError("");
        } catch (const std::exception &) {
            throw InputError("time limit must be 'auto' or a number of seconds, got '" + text + "'");
        }
        if (!(value > 0.0)) throw InputError("time limit must be positive");
        return TimeLimitPolicy{value};
    }
};

/// Rounds to whole microseconds so values survive a %.6f round trip.
inline double quantize_time(double seconds) { return std::round(seconds * 1e6) / 1e6; }

struct BenchInstance {
    std::string id;
    Instance instance;
};

struct RunRecord {
    std::string instance;
    std::string algo;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t sigma = 0;
    std::optional<Objective> objective;  // empty for failed runs
    double time_to_best = 0.0;
    double time_limit = 0.0;
    std::vector<Improvement> trajectory;
    std::vector<RunIndex> selected;  // best solution; not persisted
    std::string error;

    [[nodiscard]] bool ok() const noexcept { return objective.has_value(); }
};

/// Runs one solver on one instance. Solver exceptions become a failed record.
inline RunRecord run_single(const BenchInstance &bi, const AlgorithmConfig &algo, double time_limit,
                            std::uint64_t seed, BudgetUnit unit = BudgetUnit::seconds) {
    RunRecord rec;
    rec.instance = bi.id;
    rec.algo = algo.name;
    rec.seed = seed;
    rec.n = bi.instance.n();
    rec.sigma = bi.instance.sigma();
    rec.time_limit = time_limit;
    auto observer = [&rec, unit](const Improvement &imp) {
        Improvement q = imp;
        if (unit == BudgetUnit::seconds) q.elapsed = quantize_time(q.elapsed);
        rec.trajectory.push_back(q);
    };
    try {
        check_algorithm_name(algo.name);
        SolveResult result;
        if (algo.name == "brkga") {
            auto p = algo.brkga;
            p.seed = seed;
            p.time_limit = time_limit;
            p.budget_unit = unit;
            result = run_brkga(bi.instance, p, observer);
        } else {
            auto p = algo.aco;
            p.seed = seed;
            p.time_limit = time_limit;
            p.budget_unit = unit;
            result = run_aco(bi.instance, p, observer);
        }
        rec.objective = result.best.objective;
        rec.selected = std::move(result.best.selected);
        rec.time_to_best = rec.trajectory.empty() ? 0.0 : rec.trajectory.back().elapsed;
    } catch (const std::exception &e) {
        rec.objective.reset();
        rec.error = e.what();
    }
    return rec;
}

struct ExperimentOptions {
    TimeLimitPolicy limits;
    std::uint64_t seed = 1;
    BudgetUnit budget_unit = BudgetUnit::seconds;
    /// Concurrent (instance, algorithm) runs.
    unsigned jobs = 1;
};

/// One record per (instance, algorithm), in instance-major order.
inline std::vector<RunRecord> run_experiment(const std::vector<BenchInstance> &instances,
                                             const std::vector<AlgorithmConfig> &algorithms,
                                             const ExperimentOptions &options) {
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            tasks.emplace_back(i, a);
        }
    }
    std::vector<RunRecord> records(tasks.size());
    auto work = [&](std::size_t t) {
        const auto &[i, a] = tasks[t];
        records[t] = run_single(instances[i], algorithms[a], options.limits.limit_for(instances[i].instance.n()),
                                options.seed, options.budget_unit);
    };
    if (options.jobs <= 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) work(t);
    } else {
        std::mutex mutex;
        std::size_t next = 0;
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < options.jobs; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t t = 0;
                    {
                        std::lock_guard lock(mutex);
                        if (next >= tasks.size()) return;
                        t = next++;
                    }
                    work(t);
                }
            });
        }
    }
    return records;
}

/// Mean over one (n, sigma, algorithm) cell.
struct SummaryRow {
    std::size_t n = 0;
    std::size_t sigma = 0;
    std::string algo;
    std::size_t runs = 0;
    std::size_t failed = 0;
    double mean_objective = 0.0;
    double mean_time = 0.0;
    bool best = false;  // highest mean objective within its (n, sigma) cell
};

inline std::vector<SummaryRow> aggregate(const std::vector<RunRecord> &records) {
    std::map<std::tuple<std::size_t, std::size_t, std::string>, SummaryRow> cells;
    std::map<std::tuple<std::size_t, std::size_t, std::string>, std::pair<double, double>> sums;
    for (const auto &r : records) {
        auto key = std::make_tuple(r.n, r.sigma, r.algo);
        auto &row = cells[key];
        row.n = r.n;
        row.sigma = r.sigma;
        row.algo = r.algo;
        if (!r.ok()) {
            ++row.failed;
            continue;
        }
        ++row.runs;
        sums[key].first += static_cast<double>(*r.objective);
        sums[key].second += r.time_to_best;
    }
    std::vector<SummaryRow> rows;
    for (auto &[key, row] : cells) {
        if (row.runs > 0) {
            row.mean_objective = sums[key].first / static_cast<double>(row.runs);
            row.mean_time = sums[key].second / static_cast<double>(row.runs);
        }
        rows.push_back(row);
    }
    for (auto &row : rows) {
        double top = -1.0;
        for (const auto &other : rows) {
            if (other.n == row.n && other.sigma == row.sigma && other.runs > 0) {
                top = std::max(top, other.mean_objective);
            }
        }
        row.best = row.runs > 0 && row.mean_objective == top;
    }
    return rows;
}

/// Per-instance ranks (1 = best objective, ties share the mean rank).
inline std::map<std::string, std::map<std::string, double>> instance_ranks(const std::vector<RunRecord> &records) {
    std::set<std::string> algos;
    std::map<std::string, std::map<std::string, Objective>> table;
    for (const auto &r : records) {
        algos.insert(r.algo);
        if (r.ok()) {
            table[r.instance][r.algo] = *r.objective;
        } else {
            table[r.instance];
        }
    }
    std::map<std::string, std::map<std::string, double>> ranks;
    for (const auto &[inst, by_algo] : table) {
        for (const auto &a : algos) {
            if (!by_algo.count(a)) {
                throw InputError("no successful result for algorithm '" + a + "' on instance '" + inst + "'");
            }
        }
        for (const auto &[a, obj] : by_algo) {
            std::size_t better = 0;
            std::size_t equal = 0;
            for (const auto &[b, other] : by_algo) {
                if (other > obj) ++better;
                if (other == obj) ++equal;
            }
            // Positions better+1 .. better+equal averaged.
            ranks[inst][a] = static_cast<double>(better) + (static_cast<double>(equal) + 1.0) / 2.0;
        }
    }
    return ranks;
}

inline std::map<std::string, double> average_ranks(const std::vector<RunRecord> &records) {
    auto ranks = instance_ranks(records);
    std::map<std::string, double> mean;
    for (const auto &[inst, by_algo] : ranks) {
        for (const auto &[a, r] : by_algo) {
            mean[a] += r;
        }
    }
    for (auto &[a, total] : mean) {
        total /= static_cast<double>(ranks.size());
    }
    return mean;
}

/// Best-so-far objective of a trajectory at elapsed time t (0 before the first event).
inline Objective best_at(const std::vector<Improvement> &trajectory, double t) {
    Objective best = 0;
    for (const auto &imp : trajectory) {
        if (imp.elapsed > t) break;
        best = std::max(best, imp.objective);
    }
    return best;
}

// Persistence

inline const char *kResultsHeader = "instance\talgo\tseed\tn\tsigma\tobjective\ttime_to_best\ttime_limit";
inline const char *kSummaryHeader = "n\tsigma\talgo\truns\tfailed\tmean_objective\tmean_time\tbest";

inline std::string format_results(const std::vector<RunRecord> &records) {
    std::string out = std::string(kResultsHeader) + "\n";
    for (const auto &r : records) {
        out += fmt::format("{}\t{}\t{}\t{}\t{}\t", r.instance, r.algo, r.seed, r.n, r.sigma);
        if (r.ok()) {
            out += fmt::format("{}\t{:.6f}\t{:.6f}\n", *r.objective, r.time_to_best, r.time_limit);
        } else {
            out += fmt::format("NA\tNA\t{:.6f}\n", r.time_limit);
        }
    }
    return out;
}

inline std::vector<RunRecord> parse_results(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kResultsHeader) {
        throw InputError("results file: unexpected header");
    }
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            auto tab = line.find('\t', start);
            cols.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (cols.size() != 8) {
            throw InputError("results file: expected 8 columns in '" + line + "'");
        }
        RunRecord r;
        r.instance = cols[0];
        r.algo = cols[1];
        r.seed = std::stoull(cols[2]);
        r.n = std::stoull(cols[3]);
        r.sigma = std::stoull(cols[4]);
        if (cols[5] != "NA") {
            r.objective = std::stoll(cols[5]);
            r.time_to_best = std::stod(cols[6]);
        } else {
            r.error = "failed";
        }
        r.time_limit = std::stod(cols[7]);
        records.push_back(std::move(r));
    }
    return records;
}

inline std::string format_summary(const std::vector<SummaryRow> &rows) {
    std::string out = std::string(kSummaryHeader) + "\n";
    for (const auto &r : rows) {
        out += fmt::format("{}\t{}\t{}\t{}\t{}\t{:.4f}\t{:.4f}\t{}\n", r.n, r.sigma, r.algo, r.runs, r.failed,
                           r.mean_objective, r.mean_time, r.best ? "*" : "");
    }
    return out;
}

/// elapsed, objective, signature (16 hex digits), tab-separated, no header.
inline std::string format_trajectory(const std::vector<Improvement> &trajectory, BudgetUnit unit) {
    std::string out;
    for (const auto &imp : trajectory) {
        if (unit == BudgetUnit::seconds) {
            out += fmt::format("{:.6f}\t{}\t{:016x}\n", imp.elapsed, imp.objective, imp.signature);
        } else {
            out += fmt::format("{}\t{}\t{:016x}\n", static_cast<std::uint64_t>(imp.elapsed), imp.objective,
                               imp.signature);
        }
    }
    return out;
}

inline std::string trajectory_file_name(const RunRecord &r) {
    auto stem = std::filesystem::path(r.instance).stem().string();
    return fmt::format("{}__{}__{}.tsv", stem, r.algo, r.seed);
}

inline void write_text(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline nlohmann::json config_json(const AlgorithmConfig &algo) {
    nlohmann::json j;
    j["algo"] = algo.name;
    if (algo.name == "brkga") {
        const auto &p = algo.brkga;
        j["pop_size"] = p.pop_size;
        j["prop_elite"] = p.prop_elite;
        j["prop_mutant"] = p.prop_mutant;
        j["p_elite"] = p.p_elite;
        j["jobs"] = p.jobs;
        if (p.max_generations) j["max_generations"] = *p.max_generations;
    } else {
        const auto &p = algo.aco;
        j["n_ants"] = p.n_ants;
        j["learning_rate"] = p.learning_rate;
        j["d_rate"] = p.d_rate;
        j["tau_min"] = kTauMin;
        j["tau_max"] = kTauMax;
        j["jobs"] = p.jobs;
        if (p.max_iterations) j["max_iterations"] = *p.max_iterations;
    }
    return j;
}

/// results.tsv, summary.tsv, trajectories/*.tsv and manifest.json under `dir`.
inline void write_experiment(const std::filesystem::path &dir, const std::vector<RunRecord> &records,
                             const std::vector<AlgorithmConfig> &algorithms, const ExperimentOptions &options) {
    std::error_code ec;
    std::filesystem::create_directories(dir / "trajectories", ec);
    if (ec) throw IoError("cannot create '" + (dir / "trajectories").string() + "'");
    write_text(dir / "results.tsv", format_results(records));
    write_text(dir / "summary.tsv", format_summary(aggregate(records)));
    for (const auto &r : records) {
        write_text(dir / "trajectories" / trajectory_file_name(r), format_trajectory(r.trajectory, options.budget_unit));
    }
    nlohmann::json manifest;
    manifest["tool"] = "lrs";
    manifest["version"] = "1.0.0";
    manifest["seed"] = options.seed;
    manifest["budget_unit"] = to_string(options.budget_unit);
    manifest["time_limit"] = options.limits.fixed ? nlohmann::json(*options.limits.fixed) : nlohmann::json("auto");
    manifest["jobs"] = options.jobs;
    manifest["algorithms"] = nlohmann::json::array();
    for (const auto &a : algorithms) manifest["algorithms"].push_back(config_json(a));
    manifest["runs"] = nlohmann::json::array();
    for (const auto &r : records) {
        nlohmann::json run{{"instance", r.instance}, {"algo", r.algo}, {"seed", r.seed},
                           {"time_limit", r.time_limit}, {"trajectory", trajectory_file_name(r)}};
        if (!r.ok()) run["error"] = r.error;
        manifest["runs"].push_back(std::move(run));
    }
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

/// Wall time of individual evaluations, in milliseconds.
struct LatencySummary {
    std::vector<double> samples_ms;
    double min_ms = 0.0;
    double mean_ms = 0.0;
    double median_ms = 0.0;
    double p99_ms = 0.0;
    double max_ms = 0.0;
};

inline LatencySummary summarize_latency(std::vector<double> samples_ms) {
    LatencySummary s;
    s.samples_ms = samples_ms;
    if (samples_ms.empty()) return s;
    std::sort(samples_ms.begin(), samples_ms.end());
    const auto count = samples_ms.size();
    s.min_ms = samples_ms.front();
    s.max_ms = samples_ms.back();
    double total = 0.0;
    for (double v : samples_ms) total += v;
    s.mean_ms = total / static_cast<double>(count);
    s.median_ms = samples_ms[(count - 1) / 2];
    // nearest-rank percentile
    auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(count)));
    s.p99_ms = samples_ms[std::max<std::size_t>(rank, 1) - 1];
    return s;
}

/// Times the evaluation (key sort + decode) of `samples` uniformly random individuals.
inline LatencySummary measure_decode_latency(const Instance &instance, std::size_t samples = 100,
                                             std::uint64_t seed = 1) {
    if (samples == 0) throw InputError("samples must be at least 1");
    Rng rng(seed, "latency");
    DecodeScratch scratch;
    std::vector<double> times;
    times.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        auto individual = random_individual(instance.m(), rng);
        auto start = std::chrono::steady_clock::now();
        auto solution = evaluate(individual, instance, scratch);
        auto stop = std::chrono::steady_clock::now();
        if (solution.objective < 0) throw std::logic_error("negative objective");
        times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return summarize_latency(std::move(times));
}

}  // namespace lrs

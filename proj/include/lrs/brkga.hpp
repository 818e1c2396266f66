#pragma once

// Biased random-key genetic algorithm. Each generation keeps the elite
// fraction, injects fresh random mutants and fills the rest with biased
// uniform crossover between an elite and a non-elite parent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "lrs/core.hpp"
#include "lrs/decoder.hpp"
#include "lrs/rng.hpp"
#include "lrs/trajectory.hpp"

namespace lrs {

struct BrkgaParams {
    std::size_t pop_size = 356;
    double prop_elite = 0.18;
    double prop_mutant = 0.29;
    double p_elite = 0.69;
    std::uint64_t seed = 1;
    double time_limit = 1.0;
    BudgetUnit budget_unit = BudgetUnit::seconds;
    std::optional<std::size_t> max_generations;
    /// Stop as soon as this objective is reached (e.g. a known optimum).
    std::optional<Objective> target_objective;
    unsigned jobs = 1;

    [[nodiscard]] std::size_t elite_count() const noexcept {
        return std::max<std::size_t>(
            static_cast<std::size_t>(std::floor(prop_elite * static_cast<double>(pop_size))), 1);
    }
    [[nodiscard]] std::size_t mutant_count() const noexcept {
        return std::max<std::size_t>(
            static_cast<std::size_t>(std::floor(prop_mutant * static_cast<double>(pop_size))), 1);
    }
    [[nodiscard]] std::size_t offspring_count() const noexcept {
        return pop_size - elite_count() - mutant_count();
    }

    void validate() const {
        if (pop_size == 0) throw InputError("pop_size must be positive");
        if (!(prop_elite >= 0.1 && prop_elite <= 0.25)) throw InputError("prop_elite must lie in [0.1, 0.25]");
        if (!(prop_mutant >= 0.1 && prop_mutant <= 0.3)) throw InputError("prop_mutant must lie in [0.1, 0.3]");
        if (!(p_elite >= 0.51 && p_elite <= 0.8)) throw InputError("p_elite must lie in [0.51, 0.8]");
        if (!(time_limit > 0.0)) throw InputError("time_limit must be positive");
        if (jobs == 0) throw InputError("jobs must be positive");
        if (elite_count() + mutant_count() >= pop_size) {
            throw InputError("pop_size too small: elite + mutant individuals leave no room for offspring");
        }
    }
};

/// Biased uniform crossover: every key comes from the elite parent with
/// probability p_elite, otherwise from the other parent.
inline Individual crossover(const Individual &elite_parent, const Individual &other_parent,
                            double p_elite, Rng &rng) {
    if (elite_parent.keys.size() != other_parent.keys.size()) {
        throw InputError("crossover parents differ in length");
    }
    Individual child;
    child.keys.resize(elite_parent.keys.size());
    for (std::size_t i = 0; i < child.keys.size(); ++i) {
        child.keys[i] = rng.uniform() < p_elite ? elite_parent.keys[i] : other_parent.keys[i];
    }
    return child;
}

inline Individual random_individual(std::size_t m, Rng &rng) {
    Individual ind;
    ind.keys.resize(m);
    for (auto &k : ind.keys) {
        k = rng.uniform();
    }
    return ind;
}

struct BrkgaStats {
    std::size_t generations = 0;
    std::uint64_t evaluations = 0;
    /// Decoder calls made in each generation after the initial population.
    std::vector<std::size_t> decodes_per_generation;
};

class Brkga {
  public:
    Brkga(const Instance &instance, BrkgaParams params, Observer observer = {})
        : instance_(instance),
          params_(params),
          budget_(params.budget_unit, params.time_limit),
          tracker_(std::move(observer)),
          init_rng_(params.seed, "brkga/init"),
          mutant_rng_(params.seed, "brkga/mutants"),
          crossover_rng_(params.seed, "brkga/crossover"),
          scratch_(std::max(1U, params.jobs)) {
        params_.validate();
    }

    /// Runs until the budget, generation cap or target stops the search.
    RunSolution run() {
        if (instance_.m() == 0) {
            tracker_.offer(RunSolution{}, 0.0);
            return tracker_.best();
        }
        if (!initialize()) {
            return tracker_.best();
        }
        while (!should_stop()) {
            if (!evolve()) {
                break;
            }
        }
        return tracker_.best();
    }

    /// Creates and evaluates the initial population. False if the budget ran
    /// out before every individual was evaluated.
    bool initialize() {
        population_.clear();
        population_.reserve(params_.pop_size);
        for (std::size_t i = 0; i < params_.pop_size; ++i) {
            population_.push_back(random_individual(instance_.m(), init_rng_));
        }
        if (!evaluate_range(population_, 0)) {
            return false;
        }
        sort_population(population_);
        return true;
    }

    /// One generation. False if evaluation was cut short by the budget.
    bool evolve() {
        const std::size_t pop = params_.pop_size;
        const std::size_t n_elite = params_.elite_count();
        const std::size_t n_mutant = params_.mutant_count();

        std::vector<Individual> next;
        next.reserve(pop);
        next.insert(next.end(), population_.begin(), population_.begin() + static_cast<std::ptrdiff_t>(n_elite));
        for (std::size_t i = 0; i < n_mutant; ++i) {
            next.push_back(random_individual(instance_.m(), mutant_rng_));
        }
        while (next.size() < pop) {
            const auto &elite = population_[crossover_rng_.below(n_elite)];
            const auto &other = population_[n_elite + crossover_rng_.below(pop - n_elite)];
            next.push_back(crossover(elite, other, params_.p_elite, crossover_rng_));
        }

        std::uint64_t before = budget_.evaluations();
        bool complete = evaluate_range(next, n_elite);
        stats_.decodes_per_generation.push_back(static_cast<std::size_t>(budget_.evaluations() - before));
        if (!complete) {
            return false;
        }
        sort_population(next);
        population_ = std::move(next);
        ++stats_.generations;
        return true;
    }

    [[nodiscard]] bool should_stop() const {
        if (budget_.exhausted()) return true;
        if (params_.max_generations && stats_.generations >= *params_.max_generations) return true;
        if (params_.target_objective && tracker_.has_best() &&
            tracker_.best().objective >= *params_.target_objective) {
            return true;
        }
        return false;
    }

    /// Individuals sorted by non-increasing fitness.
    [[nodiscard]] const std::vector<Individual> &population() const noexcept { return population_; }
    [[nodiscard]] const RunSolution &best() const noexcept { return tracker_.best(); }
    [[nodiscard]] double time_to_best() const noexcept { return tracker_.time_to_best(); }
    [[nodiscard]] BrkgaStats stats() const {
        BrkgaStats out = stats_;
        out.evaluations = budget_.evaluations();
        return out;
    }
    [[nodiscard]] const BrkgaParams &params() const noexcept { return params_; }

  private:
    // Stable: among equal fitness the earlier (older) individual stays first.
    static void sort_population(std::vector<Individual> &individuals) {
        std::stable_sort(individuals.begin(), individuals.end(),
                         [](const Individual &a, const Individual &b) { return *a.fitness > *b.fitness; });
    }

    bool accept_improvements() const {
        return !tracker_.has_best() || budget_.elapsed() <= budget_.limit();
    }

    bool evaluate_range(std::vector<Individual> &individuals, std::size_t first) {
        const std::size_t total = individuals.size() - first;
        std::size_t allowed = total;
        if (budget_.unit() == BudgetUnit::evaluations) {
            auto remaining = budget_.limit() - static_cast<double>(budget_.evaluations());
            allowed = remaining <= 0.0 ? 0 : std::min<std::size_t>(total, static_cast<std::size_t>(std::ceil(remaining)));
        }

        if (params_.jobs <= 1) {
            for (std::size_t i = first; i < first + allowed; ++i) {
                auto solution = evaluate(individuals[i], instance_, scratch_[0]);
                budget_.count_evaluations();
                if (!accept_improvements()) {
                    return false;
                }
                tracker_.offer(solution, budget_.elapsed());
                if (budget_.unit() == BudgetUnit::seconds && budget_.exhausted()) {
                    return i + 1 == individuals.size();
                }
            }
            return allowed == total;
        }

        std::vector<RunSolution> decoded(allowed);
        const unsigned workers = std::min<unsigned>(params_.jobs, static_cast<unsigned>(std::max<std::size_t>(allowed, 1)));
        {
            std::vector<std::jthread> threads;
            for (unsigned w = 0; w < workers; ++w) {
                threads.emplace_back([&, w] {
                    for (std::size_t k = w; k < allowed; k += workers) {
                        decoded[k] = evaluate(individuals[first + k], instance_, scratch_[w]);
                    }
                });
            }
        }
        for (std::size_t k = 0; k < allowed; ++k) {
            budget_.count_evaluations();
            if (!accept_improvements()) {
                return false;
            }
            tracker_.offer(decoded[k], budget_.elapsed());
        }
        return allowed == total;
    }

    const Instance &instance_;
    BrkgaParams params_;
    Budget budget_;
    BestTracker tracker_;
    Rng init_rng_;
    Rng mutant_rng_;
    Rng crossover_rng_;
    std::vector<DecodeScratch> scratch_;
    std::vector<Individual> population_;
    BrkgaStats stats_;
};

inline SolveResult run_brkga(const Instance &instance, const BrkgaParams &params, Observer observer = {}) {
    Brkga ga(instance, params, std::move(observer));
    auto best = ga.run();
    return SolveResult{std::move(best), ga.time_to_best()};
}

}  // namespace lrs

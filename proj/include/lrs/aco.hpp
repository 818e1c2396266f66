#pragma once

// Max-Min Ant System in the hypercube framework. Ants build run permutations
// biased by pheromone times run length; the shared decoder turns each one into
// a valid solution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "lrs/core.hpp"
#include "lrs/decoder.hpp"
#include "lrs/rng.hpp"
#include "lrs/trajectory.hpp"

namespace lrs {

struct AcoParams {
    std::size_t n_ants = 10;
    double learning_rate = 0.33;
    double d_rate = 0.92;
    std::uint64_t seed = 1;
    double time_limit = 1.0;
    BudgetUnit budget_unit = BudgetUnit::seconds;
    std::optional<std::size_t> max_iterations;
    std::optional<Objective> target_objective;
    unsigned jobs = 1;

    void validate() const {
        if (n_ants == 0) throw InputError("n_ants must be positive");
        if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw InputError("learning_rate must lie in (0, 1]");
        if (!(d_rate >= 0.0 && d_rate <= 1.0)) throw InputError("d_rate must lie in [0, 1]");
        if (!(time_limit > 0.0)) throw InputError("time_limit must be positive");
        if (jobs == 0) throw InputError("jobs must be positive");
    }
};

inline constexpr double kTauMin = 0.001;
inline constexpr double kTauMax = 0.999;
inline constexpr double kTauInit = 0.5;

/// Builds a permutation position by position: with probability d_rate the
/// remaining run maximising tau * length (lowest index on ties), otherwise a
/// roulette-wheel draw over the same weights.
inline Permutation build_permutation(std::span<const double> tau, const Instance &instance,
                                     double d_rate, Rng &rng) {
    const std::size_t m = instance.m();
    if (tau.size() != m) {
        throw InputError("pheromone vector length does not match the number of runs");
    }
    const auto &runs = instance.runs();
    std::vector<double> weight(m);
    for (std::size_t k = 0; k < m; ++k) {
        weight[k] = tau[k] * static_cast<double>(runs[k].length);
    }
    // Greedy picks walk this order, skipping runs already placed.
    std::vector<std::uint32_t> by_weight(m);
    std::iota(by_weight.begin(), by_weight.end(), 0U);
    std::stable_sort(by_weight.begin(), by_weight.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return weight[a] > weight[b]; });

    std::vector<char> used(m, 0);
    std::size_t cursor = 0;
    Permutation sigma;
    sigma.reserve(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
        std::size_t j = 0;
        if (rng.uniform() <= d_rate) {
            while (used[by_weight[cursor]]) ++cursor;
            j = by_weight[cursor];
        } else {
            double total = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                if (!used[k]) total += weight[k];
            }
            const double target = rng.uniform() * total;
            double acc = 0.0;
            std::size_t last = m;
            j = m;
            for (std::size_t k = 0; k < m; ++k) {
                if (used[k]) continue;
                last = k;
                acc += weight[k];
                if (target < acc) {
                    j = k;
                    break;
                }
            }
            if (j == m) j = last;  // rounding at the top end of the wheel
        }
        used[j] = 1;
        sigma.push_back(static_cast<RunIndex>(j + 1));
    }
    return sigma;
}

/// Pheromone vector plus the MMAS bookkeeping that drives updates and restarts.
struct PheromoneState {
    std::vector<double> tau;
    RunSolution best_so_far;
    RunSolution restart_best;
    RunSolution iteration_best;
    bool has_best_so_far = false;
    bool has_restart_best = false;
    double convergence_factor = 0.0;
    bool bs_update = false;
    std::size_t restarts = 0;

    explicit PheromoneState(std::size_t m = 0) : tau(m, kTauInit) {}

    void reset_tau() { std::fill(tau.begin(), tau.end(), kTauInit); }
};

struct UpdateWeights {
    double iteration_best = 0.0;
    double restart_best = 0.0;
    double best_so_far = 0.0;
};

inline UpdateWeights update_weights(double cf, bool bs_update) {
    if (bs_update) return {0.0, 0.0, 1.0};
    if (cf < 0.4) return {1.0, 0.0, 0.0};
    if (cf < 0.6) return {2.0 / 3.0, 1.0 / 3.0, 0.0};
    if (cf < 0.8) return {1.0 / 3.0, 2.0 / 3.0, 0.0};
    return {0.0, 1.0, 0.0};
}

/// 0 when every tau sits at 0.5, 1 when every tau sits at a bound.
inline double convergence_factor(std::span<const double> tau) {
    if (tau.empty()) return 0.0;
    double sum = 0.0;
    for (double t : tau) {
        sum += std::max(kTauMax - t, t - kTauMin);
    }
    const double ratio = sum / (static_cast<double>(tau.size()) * (kTauMax - kTauMin));
    return std::clamp(2.0 * (ratio - 0.5), 0.0, 1.0);
}

/// Moves every tau towards the weighted desirability of the iteration-best,
/// restart-best and best-so-far solutions, then clamps to [kTauMin, kTauMax].
inline void apply_pheromone_update(PheromoneState &state, double learning_rate) {
    const auto w = update_weights(state.convergence_factor, state.bs_update);
    std::vector<double> xi(state.tau.size(), 0.0);
    auto deposit = [&](const RunSolution &s, double weight) {
        if (weight == 0.0) return;
        for (RunIndex i : s.selected) {
            xi[static_cast<std::size_t>(i - 1)] += weight;
        }
    };
    deposit(state.iteration_best, w.iteration_best);
    if (state.has_restart_best) deposit(state.restart_best, w.restart_best);
    if (state.has_best_so_far) deposit(state.best_so_far, w.best_so_far);
    for (std::size_t i = 0; i < state.tau.size(); ++i) {
        double t = state.tau[i] + learning_rate * (xi[i] - state.tau[i]);
        state.tau[i] = std::clamp(t, kTauMin, kTauMax);
    }
    state.convergence_factor = convergence_factor(state.tau);
}

class AntSystem {
  public:
    AntSystem(const Instance &instance, AcoParams params, Observer observer = {})
        : instance_(instance),
          params_(params),
          budget_(params.budget_unit, params.time_limit),
          tracker_(std::move(observer)),
          state_(instance.m()),
          scratch_(std::max(1U, params.jobs)) {
        params_.validate();
    }

    RunSolution run() {
        if (instance_.m() == 0) {
            tracker_.offer(RunSolution{}, 0.0);
            return tracker_.best();
        }
        while (!should_stop()) {
            if (!iterate()) {
                break;
            }
        }
        return tracker_.best();
    }

    /// One iteration: construct, decode, update. False if the budget cut the
    /// constructions short.
    bool iterate() {
        std::size_t allowed = params_.n_ants;
        if (budget_.unit() == BudgetUnit::evaluations) {
            double remaining = budget_.limit() - static_cast<double>(budget_.evaluations());
            allowed = remaining <= 0.0 ? 0 : std::min<std::size_t>(allowed, static_cast<std::size_t>(std::ceil(remaining)));
        }
        std::vector<RunSolution> solutions(allowed);
        auto construct = [&](std::size_t ant, DecodeScratch &scratch) {
            Rng rng(params_.seed, "aco/ant", {iterations_, ant});
            auto sigma = build_permutation(state_.tau, instance_, params_.d_rate, rng);
            solutions[ant] = decode(sigma, instance_, scratch);
        };

        bool complete = allowed == params_.n_ants;
        std::size_t built = allowed;
        if (params_.jobs <= 1) {
            for (std::size_t ant = 0; ant < allowed; ++ant) {
                construct(ant, scratch_[0]);
                if (budget_.unit() == BudgetUnit::seconds && ant + 1 < allowed && budget_.exhausted()) {
                    built = ant + 1;
                    complete = false;
                    break;
                }
            }
        } else {
            const unsigned workers = std::min<unsigned>(params_.jobs, static_cast<unsigned>(std::max<std::size_t>(allowed, 1)));
            std::vector<std::jthread> threads;
            for (unsigned w = 0; w < workers; ++w) {
                threads.emplace_back([&, w] {
                    for (std::size_t ant = w; ant < allowed; ant += workers) {
                        construct(ant, scratch_[w]);
                    }
                });
            }
        }

        bool improved = false;
        std::size_t ib = built;
        for (std::size_t ant = 0; ant < built; ++ant) {
            budget_.count_evaluations();
            if (ib == built || solutions[ant].objective > solutions[ib].objective) {
                ib = ant;
            }
            if (!tracker_.has_best() || budget_.elapsed() <= budget_.limit()) {
                improved |= tracker_.offer(solutions[ant], budget_.elapsed());
            }
        }
        if (!complete || built == 0) {
            return false;
        }

        state_.iteration_best = solutions[ib];
        if (!state_.has_restart_best || state_.iteration_best.objective > state_.restart_best.objective) {
            state_.restart_best = state_.iteration_best;
            state_.has_restart_best = true;
        }
        if (!state_.has_best_so_far || state_.iteration_best.objective > state_.best_so_far.objective) {
            state_.best_so_far = state_.iteration_best;
            state_.has_best_so_far = true;
        }

        apply_pheromone_update(state_, params_.learning_rate);

        if (state_.convergence_factor > 0.99 && !improved) {
            if (state_.bs_update) {
                state_.reset_tau();
                state_.has_restart_best = false;
                state_.restart_best = RunSolution{};
                state_.bs_update = false;
                state_.convergence_factor = 0.0;
                ++state_.restarts;
            } else {
                state_.bs_update = true;
            }
        }
        ++iterations_;
        return true;
    }

    [[nodiscard]] bool should_stop() const {
        if (budget_.exhausted()) return true;
        if (params_.max_iterations && iterations_ >= *params_.max_iterations) return true;
        if (params_.target_objective && tracker_.has_best() &&
            tracker_.best().objective >= *params_.target_objective) {
            return true;
        }
        return false;
    }

    [[nodiscard]] const PheromoneState &state() const noexcept { return state_; }
    [[nodiscard]] const RunSolution &best() const noexcept { return tracker_.best(); }
    [[nodiscard]] double time_to_best() const noexcept { return tracker_.time_to_best(); }
    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }
    [[nodiscard]] std::uint64_t evaluations() const noexcept { return budget_.evaluations(); }

  private:
    const Instance &instance_;
    AcoParams params_;
    Budget budget_;
    BestTracker tracker_;
    PheromoneState state_;
    std::vector<DecodeScratch> scratch_;
    std::size_t iterations_ = 0;
};

inline SolveResult run_aco(const Instance &instance, const AcoParams &params, Observer observer = {}) {
    AntSystem aco(instance, params, std::move(observer));
    auto best = aco.run();
    return SolveResult{std::move(best), aco.time_to_best()};
}

}  // namespace lrs

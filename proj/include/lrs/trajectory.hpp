#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "lrs/core.hpp"

namespace lrs {

/// What "elapsed" and "time limit" are measured in.
enum class BudgetUnit {
    seconds,      // wall clock
    evaluations,  // decoder calls; makes whole runs reproducible byte for byte
};

inline std::string to_string(BudgetUnit unit) {
    return unit == BudgetUnit::seconds ? "seconds" : "evaluations";
}

inline BudgetUnit parse_budget_unit(const std::string &text) {
    if (text == "seconds") return BudgetUnit::seconds;
    if (text == "evaluations") return BudgetUnit::evaluations;
    throw InputError("unknown budget unit '" + text + "'");
}

/// Stable 64-bit identifier of a selected-index set (order-insensitive input
/// is expected to be sorted; RunSolution always is).
inline std::uint64_t solution_signature(std::span<const RunIndex> selected) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (RunIndex i : selected) {
        auto v = static_cast<std::uint32_t>(i);
        for (int b = 0; b < 4; ++b) {
            h ^= (v >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

/// One best-so-far improvement.
struct Improvement {
    double elapsed = 0.0;
    Objective objective = 0;
    std::uint64_t signature = 0;
};

using Observer = std::function<void(const Improvement &)>;

/// Result of one solver run.
struct SolveResult {
    RunSolution best;
    double time_to_best = 0.0;
};

/// Tracks consumption of a time or evaluation budget.
class Budget {
  public:
    using clock = std::chrono::steady_clock;

    Budget(BudgetUnit unit, double limit) : unit_(unit), limit_(limit), start_(clock::now()) {
        if (!(limit > 0.0)) {
            throw InputError("time limit must be positive");
        }
    }

    [[nodiscard]] BudgetUnit unit() const noexcept { return unit_; }
    [[nodiscard]] double limit() const noexcept { return limit_; }
    [[nodiscard]] std::uint64_t evaluations() const noexcept { return evaluations_; }

    void count_evaluations(std::uint64_t k = 1) noexcept { evaluations_ += k; }

    [[nodiscard]] double elapsed() const noexcept {
        if (unit_ == BudgetUnit::evaluations) {
            return static_cast<double>(evaluations_);
        }
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

    [[nodiscard]] bool exhausted() const noexcept { return elapsed() >= limit_; }

  private:
    BudgetUnit unit_;
    double limit_;
    clock::time_point start_;
    std::uint64_t evaluations_ = 0;
};

/// Keeps the best solution of a run and forwards strict improvements.
class BestTracker {
  public:
    explicit BestTracker(Observer observer) : observer_(std::move(observer)) {}

    /// Returns true if `candidate` strictly improved the best-so-far.
    bool offer(const RunSolution &candidate, double elapsed) {
        if (has_best_ && candidate.objective <= best_.objective) {
            return false;
        }
        best_ = candidate;
        has_best_ = true;
        time_to_best_ = elapsed;
        if (observer_) {
            observer_(Improvement{elapsed, best_.objective, solution_signature(best_.selected)});
        }
        return true;
    }

    [[nodiscard]] bool has_best() const noexcept { return has_best_; }
    [[nodiscard]] const RunSolution &best() const noexcept { return best_; }
    [[nodiscard]] double time_to_best() const noexcept { return time_to_best_; }

  private:
    Observer observer_;
    RunSolution best_;
    bool has_best_ = false;
    double time_to_best_ = 0.0;
};

}  // namespace lrs

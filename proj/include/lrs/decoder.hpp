#pragma once

// Permutation decoder shared by the BRKGA and the ant system. Runs are taken
// greedily in permutation order; a run is kept iff the selection stays valid.
// Feasibility is decided in O(|alphabet|) per run from the smallest and
// largest selected run index of every letter.

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrs/core.hpp"

namespace lrs {

/// Random-key genotype: one key in [0,1] per run.
struct Individual {
    std::vector<double> keys;
    std::optional<Objective> fitness;
};

using Permutation = std::vector<RunIndex>;

/// Orders run indices by non-increasing key; equal keys keep ascending index.
inline Permutation permutation_from_keys(std::span<const double> keys, const Instance &instance) {
    if (keys.size() != instance.m()) {
        throw InputError("individual has " + std::to_string(keys.size()) + " keys, instance has " +
                         std::to_string(instance.m()) + " runs");
    }
    Permutation sigma(keys.size());
    std::iota(sigma.begin(), sigma.end(), RunIndex{1});
    std::stable_sort(sigma.begin(), sigma.end(), [&](RunIndex a, RunIndex b) {
        return keys[static_cast<std::size_t>(a - 1)] > keys[static_cast<std::size_t>(b - 1)];
    });
    return sigma;
}

inline Permutation permutation_from_keys(const Individual &individual, const Instance &instance) {
    for (double k : individual.keys) {
        if (!(k >= 0.0 && k <= 1.0)) {
            throw InputError("random key outside [0,1]");
        }
    }
    return permutation_from_keys(individual.keys, instance);
}

/// Per-letter smallest and largest selected run index, -1 when unset.
struct LetterBounds {
    std::vector<RunIndex> lb;
    std::vector<RunIndex> ub;

    void reset(std::size_t sigma) {
        lb.assign(sigma, -1);
        ub.assign(sigma, -1);
    }
};

/// Reusable per-worker buffers. Not shareable between concurrent decodes.
class DecodeScratch {
  public:
    LetterBounds bounds;
    std::vector<char> taken;

    void prepare(const Instance &instance) {
        bounds.reset(instance.sigma());
        taken.assign(instance.m(), 0);
    }
};

namespace detail {

inline void check_permutation(std::span<const RunIndex> sigma, const Instance &instance,
                              std::vector<char> &seen) {
    if (sigma.size() != instance.m()) {
        throw InputError("permutation has length " + std::to_string(sigma.size()) +
                         ", instance has " + std::to_string(instance.m()) + " runs");
    }
    seen.assign(instance.m(), 0);
    for (RunIndex j : sigma) {
        if (j < 1 || static_cast<std::size_t>(j) > instance.m() || seen[static_cast<std::size_t>(j - 1)]) {
            throw InputError("sequence is not a permutation of 1.." + std::to_string(instance.m()));
        }
        seen[static_cast<std::size_t>(j - 1)] = 1;
    }
}

}  // namespace detail

/// Decodes a permutation of run indices into a valid solution.
inline RunSolution decode(std::span<const RunIndex> sigma, const Instance &instance,
                          DecodeScratch &scratch) {
    detail::check_permutation(sigma, instance, scratch.taken);
    scratch.prepare(instance);
    auto &lb = scratch.bounds.lb;
    auto &ub = scratch.bounds.ub;
    const auto &runs = instance.runs();
    const std::size_t alphabet_size = instance.sigma();

    Objective total = 0;
    std::size_t count = 0;
    for (RunIndex j : sigma) {
        const Symbol c = runs[static_cast<std::size_t>(j - 1)].symbol;
        const RunIndex own_lb = lb[c];
        const RunIndex own_ub = ub[c];
        bool add_run = true;
        for (Symbol a = 0; a < alphabet_size && add_run; ++a) {
            if (a == c) {
                continue;
            }
            // Condition 1: j strictly inside the block of letter a.
            if (j > lb[a] && j < ub[a]) {
                add_run = false;
            }
            // Conditions 2 and 3 only apply once letter c has a block; before
            // that the new block is {j} and Condition 1 decides alone.
            else if (own_lb != -1) {
                // Condition 2: extending c's block leftwards over letter a.
                if (j < lb[a] && own_lb > ub[a]) {
                    add_run = false;
                }
                // Condition 3: extending c's block rightwards over letter a.
                else if (j > ub[a] && own_ub < lb[a]) {
                    add_run = false;
                }
            }
        }
        if (!add_run) {
            continue;
        }
        scratch.taken[static_cast<std::size_t>(j - 1)] = 1;
        total += runs[static_cast<std::size_t>(j - 1)].length;
        ++count;
        if (own_lb == -1) {
            lb[c] = j;
            ub[c] = j;
        } else {
            if (j < own_lb) lb[c] = j;
            if (j > own_ub) ub[c] = j;
        }
    }

    RunSolution out;
    out.objective = total;
    out.selected.reserve(count);
    for (std::size_t i = 0; i < scratch.taken.size(); ++i) {
        if (scratch.taken[i]) {
            out.selected.push_back(static_cast<RunIndex>(i + 1));
        }
    }
    return out;
}

inline RunSolution decode(std::span<const RunIndex> sigma, const Instance &instance) {
    DecodeScratch scratch;
    return decode(sigma, instance, scratch);
}

/// Keys to permutation to solution; fills the individual's cached fitness.
inline RunSolution evaluate(Individual &individual, const Instance &instance,
                            DecodeScratch &scratch) {
    auto solution = decode(permutation_from_keys(individual.keys, instance), instance, scratch);
    individual.fitness = solution.objective;
    return solution;
}

}  // namespace lrs

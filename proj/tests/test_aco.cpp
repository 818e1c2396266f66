#include "catch_amalgamated.hpp"

#include <algorithm>
#include <vector>

#include "lrs/aco.hpp"
#include "oracles.hpp"

using namespace lrs;

namespace {

AcoParams quick(std::uint64_t seed, double evaluations) {
    AcoParams p;
    p.seed = seed;
    p.budget_unit = BudgetUnit::evaluations;
    p.time_limit = evaluations;
    return p;
}

bool is_permutation_of_runs(const Permutation &p, std::size_t m) {
    if (p.size() != m) return false;
    auto sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < m; ++i) {
        if (sorted[i] != static_cast<RunIndex>(i + 1)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("default parameters") {
    AcoParams p;
    CHECK(p.n_ants == 10);
    CHECK(p.learning_rate == 0.33);
    CHECK(p.d_rate == 0.92);
    CHECK_NOTHROW(p.validate());
    p.d_rate = 1.5;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = AcoParams{};
    p.n_ants = 0;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = AcoParams{};
    p.learning_rate = 0.0;
    CHECK_THROWS_AS(p.validate(), InputError);
}

TEST_CASE("deterministic construction follows run length under uniform pheromone") {
    // lengths: 1 2 1 3 2 1
    auto inst = decompose("ABBCDDDEEF", "ABCDEF");
    REQUIRE(inst.m() == 6);
    std::vector<double> tau(inst.m(), kTauInit);
    Rng rng(1);
    CHECK(build_permutation(tau, inst, 1.0, rng) == Permutation{4, 2, 5, 1, 3, 6});

    tau[5] = 0.999;
    tau[3] = 0.001;
    // weights: .5 1 .5 .003 1 .999
    CHECK(build_permutation(tau, inst, 1.0, rng) == Permutation{2, 5, 6, 1, 3, 4});
}

TEST_CASE("roulette construction is proportional to tau times length") {
    auto inst = decompose("AAAB", "AB");
    std::vector<double> tau(2, kTauInit);
    Rng rng(5);
    int first = 0;
    const int draws = 100000;
    for (int d = 0; d < draws; ++d) {
        first += build_permutation(tau, inst, 0.0, rng).front() == 1;
    }
    CHECK(static_cast<double>(first) / draws == Catch::Approx(0.75).margin(0.02));
}

TEST_CASE("construction always yields a permutation") {
    Rng rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        auto inst = oracle::random_text(rng, rng.below(200), 1 + rng.below(10));
        std::vector<double> tau(inst.m());
        for (auto &t : tau) t = kTauMin + rng.uniform() * (kTauMax - kTauMin);
        double d = rng.uniform();
        REQUIRE(is_permutation_of_runs(build_permutation(tau, inst, d, rng), inst.m()));
    }
    auto inst = decompose("AB", "AB");
    std::vector<double> wrong(3, 0.5);
    CHECK_THROWS_AS(build_permutation(wrong, inst, 0.5, rng), InputError);
}

TEST_CASE("convergence factor and update schedule") {
    std::vector<double> middle(5, kTauInit);
    CHECK(convergence_factor(middle) == Catch::Approx(0.0).margin(1e-12));
    std::vector<double> bounds{kTauMin, kTauMax, kTauMax, kTauMin};
    CHECK(convergence_factor(bounds) == Catch::Approx(1.0));
    std::vector<double> quarter{0.25, 0.75};
    const double ratio = (std::max(kTauMax - 0.25, 0.25 - kTauMin) + std::max(kTauMax - 0.75, 0.75 - kTauMin)) /
                         (2 * (kTauMax - kTauMin));
    CHECK(convergence_factor(quarter) == Catch::Approx(2 * (ratio - 0.5)));

    auto w = update_weights(0.1, false);
    CHECK((w.iteration_best == 1.0 && w.restart_best == 0.0 && w.best_so_far == 0.0));
    w = update_weights(0.5, false);
    CHECK(w.iteration_best == Catch::Approx(2.0 / 3));
    CHECK(w.restart_best == Catch::Approx(1.0 / 3));
    w = update_weights(0.7, false);
    CHECK(w.iteration_best == Catch::Approx(1.0 / 3));
    CHECK(w.restart_best == Catch::Approx(2.0 / 3));
    w = update_weights(0.9, false);
    CHECK((w.iteration_best == 0.0 && w.restart_best == 1.0));
    w = update_weights(0.1, true);
    CHECK((w.best_so_far == 1.0 && w.iteration_best == 0.0 && w.restart_best == 0.0));
    for (double cf : {0.0, 0.39, 0.4, 0.59, 0.6, 0.79, 0.8, 1.0}) {
        auto u = update_weights(cf, false);
        REQUIRE(u.iteration_best + u.restart_best + u.best_so_far == Catch::Approx(1.0));
    }
}

TEST_CASE("pheromone update moves towards the deposited solutions and stays clamped") {
    PheromoneState state(4);
    state.iteration_best = RunSolution{{1, 3}, 2};
    state.restart_best = state.iteration_best;
    state.has_restart_best = true;
    apply_pheromone_update(state, 0.5);
    CHECK(state.tau[0] == Catch::Approx(0.75));
    CHECK(state.tau[1] == Catch::Approx(0.25));
    for (int i = 0; i < 100; ++i) apply_pheromone_update(state, 0.5);
    CHECK(state.tau[0] == kTauMax);
    CHECK(state.tau[1] == kTauMin);
    CHECK(state.convergence_factor == Catch::Approx(1.0));
}

TEST_CASE("pheromone stays within bounds during runs") {
    Rng rng(2);
    auto inst = oracle::random_text(rng, 300, 6);
    AntSystem aco(inst, quick(4, 1e9));
    for (int it = 0; it < 300; ++it) {
        REQUIRE(aco.iterate());
        for (double t : aco.state().tau) {
            REQUIRE(t >= kTauMin);
            REQUIRE(t <= kTauMax);
        }
    }
    CHECK(aco.evaluations() == 3000);
}

TEST_CASE("worked example and degenerate instances") {
    auto inst = decompose("AGGCACT", "ACGT");
    auto result = run_aco(inst, quick(1, 2000));
    CHECK(result.best.objective == 6);

    auto single = decompose("GGGGG", "G");
    AcoParams p = quick(1, 1e6);
    p.max_iterations = 1;
    CHECK(run_aco(single, p).best.objective == 5);

    auto empty = decompose("", "G");
    CHECK(run_aco(empty, quick(1, 10)).best.selected.empty());
}

TEST_CASE("best-so-far never decreases") {
    Rng rng(6);
    auto inst = oracle::random_text(rng, 500, 4);
    std::vector<Improvement> events;
    auto result = run_aco(inst, quick(11, 5000), [&](const Improvement &e) { events.push_back(e); });
    REQUIRE_FALSE(events.empty());
    for (std::size_t i = 1; i < events.size(); ++i) {
        REQUIRE(events[i].objective > events[i - 1].objective);
    }
    CHECK(events.back().objective == result.best.objective);
    CHECK(is_valid(result.best.selected, inst));
}

TEST_CASE("restart after convergence without improvement") {
    auto inst = decompose("AABBBA", "AB");
    AcoParams p = quick(3, 1e9);
    AntSystem aco(inst, p);
    bool saw_bs_update = false;
    std::size_t restarts = 0;
    for (int it = 0; it < 400 && restarts == 0; ++it) {
        const bool flagged_before = aco.state().bs_update;
        REQUIRE(aco.iterate());
        if (aco.state().restarts > restarts) {
            // a restart only follows a best-so-far phase
            REQUIRE(flagged_before);
            restarts = aco.state().restarts;
            CHECK_FALSE(aco.state().bs_update);
            CHECK_FALSE(aco.state().has_restart_best);
            for (double t : aco.state().tau) CHECK(t == kTauInit);
        }
        saw_bs_update |= aco.state().bs_update;
    }
    CHECK(saw_bs_update);
    CHECK(restarts == 1);
    CHECK(aco.best().objective == 5);
}

TEST_CASE("identical seeds give identical runs") {
    Rng rng(21);
    auto inst = oracle::random_text(rng, 400, 8);
    AntSystem a(inst, quick(5, 3000));
    AntSystem b(inst, quick(5, 3000));
    a.run();
    b.run();
    CHECK(a.state().tau == b.state().tau);
    CHECK(a.best() == b.best());
    CHECK(a.time_to_best() == b.time_to_best());

    auto parallel = quick(5, 3000);
    parallel.jobs = 2;
    AntSystem c(inst, parallel);
    c.run();
    CHECK(c.state().tau == a.state().tau);
    CHECK(c.best() == a.best());
}

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "amoebot/energy_oracles.hpp"

using namespace amoebot;

namespace {

std::vector<NodeCoord> line(int k) {
    std::vector<NodeCoord> out;
    for (int i = 0; i < k; ++i) out.push_back({i, 0});
    return out;
}

std::vector<Orientation> random_orientations(std::size_t n, std::mt19937_64& rng) {
    const auto all = all_orientations();
    std::vector<Orientation> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(all[rng() % all.size()]);
    return out;
}

}  // namespace

TEST(ParallelRecharge, SingleSourceTakesKappaRounds) { EXPECT_EQ(greedy_parallel_recharge(1, 10).rounds, 10u); }

TEST(ParallelRecharge, ThreeAmoebotPath) { EXPECT_EQ(greedy_parallel_recharge(3, 10).rounds, 30u); }

TEST(ParallelRecharge, HandRunSchedule) {
    // k = 3, kappa = 2: units keep moving toward the leaf while it has room.
    const auto s = greedy_parallel_recharge(3, 2);
    const std::vector<EnergyLevels> expect = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 1, 2}, {1, 2, 2}, {2, 2, 2}};
    EXPECT_EQ(s.configurations, expect);
}

TEST(ParallelRecharge, UnitCapacityTakesTwoKMinusOneRounds) {
    // With kappa = 1 a full source cannot harvest while it hands its unit down, so the
    // source idles every other round.
    for (int k = 2; k <= 10; ++k) EXPECT_EQ(greedy_parallel_recharge(k, 1).rounds, static_cast<std::size_t>(2 * k - 1));
}

TEST(EnergyRun, LoneSourceHarvestsKappaTimes) {
    const auto alg = transform_energy(empty_algorithm(), DemandFunction{}, 10);
    auto cfg = make_configuration(alg, {{0, 0}}, {Orientation{}});
    cfg = energize(cfg, alg, {0});
    RunOptions opts;
    opts.record_steps = true;
    const auto res = run(alg, cfg, opts);
    EXPECT_TRUE(res.terminated);
    EXPECT_EQ(res.activations, 10u);
    EXPECT_EQ(res.final.value(0, res.final.schema().id(kEnergyBatteryVar)), 10);
}

TEST(Dominance, RandomSequentialRunsDominateParallel) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 6);
        const int kappa = 1 + static_cast<int>(rng() % 4);
        const auto alg = transform_energy(empty_algorithm(), DemandFunction{1, {}}, kappa);
        const auto nodes = line(k);
        const auto cfg = stabilized_path(alg, nodes, random_orientations(nodes.size(), rng));
        RunOptions opts;
        opts.seed = rng();
        opts.record_steps = true;
        EnergyInvariantChecker checker(alg, DemandFunction{1, {}}, kappa);
        opts.observer = &checker;
        const auto res = run(alg, cfg, opts);
        ASSERT_TRUE(res.terminated);
        EXPECT_TRUE(checker.ok()) << checker.violations().front();
        std::vector<AmoebotId> path(k);
        for (int i = 0; i < k; ++i) path[i] = i;
        const auto seq = sequential_energy_schedule(alg, res.trace, path);
        const auto rep = check_dominance(seq, kappa);
        EXPECT_TRUE(rep.ok) << rep.message;
    }
}

TEST(Dominance, InjectedSpendIsDetected) {
    const int kappa = 3;
    const auto alg = transform_energy(empty_algorithm(), DemandFunction{1, {}}, kappa);
    const auto cfg = stabilized_path(alg, line(4), std::vector<Orientation>(4));
    RunOptions opts;
    opts.record_steps = true;
    const auto res = run(alg, cfg, opts);
    auto seq = sequential_energy_schedule(alg, res.trace, {0, 1, 2, 3});
    ASSERT_GE(seq.size(), 2u);
    // Take the unit harvested in round 1 away from whoever holds it.
    auto holder = std::find_if(seq[1].begin(), seq[1].end(), [](int v) { return v > 0; });
    ASSERT_NE(holder, seq[1].end());
    *holder -= 1;
    EXPECT_FALSE(check_dominance(seq, kappa).ok);
}

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "ssr/environments.hpp"
#include "ssr/mdp.hpp"
#include "ssr/rng.hpp"

namespace ssr {
namespace {

Policy random_policy(const Dims& d, RngStream& rng) {
    Policy pi(d.horizon, d.states);
    for (auto& a : pi.actions) a = static_cast<int>(rng.next_u64() % d.actions);
    return pi;
}

TEST(OptimalValues, SingleStep) {
    const Dims d{1, 1, 1};
    const std::vector<double> p{1.0};
    const auto mdp = TabularMDP::from_dense(d, p, {0.7}, RewardKind::Deterministic, 0);
    const auto sol = optimal_values(mdp);
    EXPECT_DOUBLE_EQ(sol.values.value(0, 0), 0.7);
    EXPECT_EQ(sol.policy.at(0, 0), 0);
    EXPECT_EQ(sol.values.value(1, 0), 0.0);
}

TEST(OptimalValues, DeepSeaStartValue) {
    for (int n : {2, 4, 7}) {
        const auto mdp = deep_sea({.size = n, .mask_seed = 5});
        const auto sol = optimal_values(mdp);
        EXPECT_NEAR(mdp.codec().decode_return(sol.values.value(0, mdp.initial_state()), n), 0.99,
                    1e-12);
    }
}

TEST(OptimalValues, MatchesPolicyEnumeration) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto mdp = random_mdp(3, 3, 2, seed);
        const auto sol = optimal_values(mdp);
        EXPECT_NEAR(sol.values.value(0, 0), testing::brute_force_optimum(mdp), 1e-10) << seed;
    }
}

TEST(OptimalValues, TieBreaksToSmallestAction) {
    const Dims d{1, 1, 3};
    const auto mdp = TabularMDP::from_dense(d, std::vector<double>{1, 1, 1}, {0.2, 0.5, 0.5},
                                            RewardKind::Deterministic, 0);
    EXPECT_EQ(optimal_values(mdp).policy.at(0, 0), 1);
}

TEST(OptimalValues, BoundedByRemainingSteps) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto mdp = random_mdp(4, 3, 3, seed);
        const auto sol = optimal_values(mdp);
        for (int h = 0; h <= mdp.horizon(); ++h) {
            for (int s = 0; s < mdp.states(); ++s) {
                EXPECT_LE(std::abs(sol.values.value(h, s)), mdp.horizon() - h + 1e-12);
                if (h < mdp.horizon()) {
                    const auto row = sol.values.action_values(h, s);
                    EXPECT_EQ(sol.values.value(h, s), row[argmax(row)]);
                }
            }
        }
    }
}

TEST(PolicyValues, OptimalPolicyReproducesOptimalValues) {
    const auto mdp = random_mdp(5, 4, 3, 17);
    const auto sol = optimal_values(mdp);
    const auto vt = policy_values(mdp, sol.policy);
    EXPECT_EQ(vt.v, sol.values.v);
}

TEST(PolicyValues, HandBuiltChainMatchesTrajectoryEnumeration) {
    // h=0: s0 --a0--> {s0: .3, s1: .7}, s0 --a1--> s1;  s1 --a*--> {s0: .5, s1: .5}
    // h=1: every action from every state terminates.
    const Dims d{2, 2, 2};
    const std::vector<double> p{
        0.3, 0.7, 0.0, 1.0, 0.5, 0.5, 0.5, 0.5,  // h = 0
        1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0,  // h = 1
    };
    const std::vector<double> r{0.1, 0.4, 0.2, 0.9, 0.6, 0.3, 0.8, 0.05};
    const auto mdp = TabularMDP::from_dense(d, p, r, RewardKind::Deterministic, 0);
    Policy pi(2, 2);
    pi.at(0, 0) = 0;
    pi.at(0, 1) = 1;
    pi.at(1, 0) = 0;
    pi.at(1, 1) = 1;
    // 0.1 + 0.3 * R(1,0,0) + 0.7 * R(1,1,1)
    const double expected = 0.1 + 0.3 * 0.6 + 0.7 * 0.05;
    const auto vt = policy_values(mdp, pi);
    EXPECT_NEAR(vt.value(0, 0), expected, 1e-15);
    EXPECT_NEAR(vt.value(0, 0), testing::enumerate_return(mdp, pi, 0, 0), 1e-15);
}

TEST(PolicyValues, ZeroRewardsGiveZeroValues) {
    const auto base = random_mdp(3, 2, 2, 1);
    std::vector<std::vector<Transition>> rows;
    for (int h = 0; h < 3; ++h)
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) {
                const auto succ = base.successors(h, s, a);
                rows.emplace_back(succ.begin(), succ.end());
            }
    const TabularMDP mdp(base.dims(), rows, std::vector<double>(12, 0.0), RewardKind::Bernoulli, 0);
    RngStream rng(3);
    const auto vt = policy_values(mdp, random_policy(mdp.dims(), rng));
    for (double v : vt.v) EXPECT_EQ(v, 0.0);
    for (double q : vt.q) EXPECT_EQ(q, 0.0);
}

TEST(PolicyValues, NeverExceedsOptimal) {
    RngStream rng(99);
    for (int i = 0; i < 100; ++i) {
        const auto mdp = random_mdp(1 + i % 4, 1 + i % 5, 1 + i % 3, 1000 + i);
        const auto star = optimal_values(mdp);
        const auto vt = policy_values(mdp, random_policy(mdp.dims(), rng));
        for (std::size_t j = 0; j < vt.v.size(); ++j) EXPECT_LE(vt.v[j], star.values.v[j] + 1e-9);
    }
}

TEST(PolicyValues, RejectsBadPolicies) {
    const auto mdp = random_mdp(2, 2, 2, 0);
    EXPECT_THROW(policy_values(mdp, Policy(3, 2)), std::invalid_argument);
    EXPECT_THROW(policy_values(mdp, Policy(2, 2, 5)), std::invalid_argument);
}

TEST(Variance, Examples) {
    EXPECT_EQ(variance(std::vector<double>{1, 0}, std::vector<double>{7, 3}), 0.0);
    EXPECT_DOUBLE_EQ(variance(std::vector<double>{0.5, 0.5}, std::vector<double>{0, 2}), 1.0);
    // 0.25 * 9 + 0.75 * 1 with mean 3
    EXPECT_DOUBLE_EQ(variance(std::vector<double>{0.25, 0.75}, std::vector<double>{0, 4}), 3.0);
}

TEST(Variance, DeficientRowUsesFormulaVerbatim) {
    // mean = 0.4 * 1 = 0.4; 0.4 * 0.36 + 0.4 * 0.16
    EXPECT_NEAR(variance(std::vector<double>{0.4, 0.4}, std::vector<double>{1, 0}), 0.208, 1e-15);
}

TEST(Variance, LengthMismatchThrows) {
    EXPECT_THROW(variance(std::vector<double>{1.0}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Variance, ShiftInvariantAndBounded) {
    RngStream rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 7;
        std::vector<double> dist(n), values(n), shifted(n);
        double total = 0.0;
        for (auto& p : dist) total += (p = -std::log(rng.uniform_open_low()));
        for (auto& p : dist) p /= total;
        const double c = 20.0 * rng.uniform() - 10.0;
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < n; ++i) {
            values[i] = 6.0 * rng.uniform() - 3.0;
            shifted[i] = values[i] + c;
            lo = std::min(lo, values[i]);
            hi = std::max(hi, values[i]);
        }
        const double var = variance(dist, values);
        EXPECT_NEAR(var, variance(dist, shifted), 1e-9);
        EXPECT_GE(var, 0.0);
        EXPECT_LE(var, 9.0);
        EXPECT_LE(var, (hi - lo) * (hi - lo) / 4.0 + 1e-12);
    }
}

TEST(Clip, Examples) {
    EXPECT_EQ(clip(4, 10), 4);
    EXPECT_EQ(clip(4, -10), -4);
    EXPECT_EQ(clip(4, 3), 3);
    EXPECT_EQ(clip(0, 3), 0);
    EXPECT_THROW(clip(-1, 0), std::invalid_argument);
}

TEST(Clip, Idempotent) {
    RngStream rng(8);
    for (int i = 0; i < 1000; ++i) {
        const double a = 5.0 * rng.uniform();
        const double x = 20.0 * rng.uniform() - 10.0;
        const double once = clip(a, x);
        EXPECT_EQ(clip(a, once), once);
        EXPECT_LE(std::abs(once), a);
        if (std::abs(x) <= a) {
            EXPECT_EQ(once, x);
        }
    }
}

TEST(TabularMDP, RejectsInvalidTables) {
    const Dims d{1, 2, 1};
    EXPECT_THROW(TabularMDP::from_dense(d, std::vector<double>{0.5, 0.4, 1, 0}, {0, 0},
                                        RewardKind::Deterministic, 0),
                 std::invalid_argument);
    EXPECT_THROW(TabularMDP::from_dense(d, std::vector<double>{1, 0, 1, 0}, {1.5, 0},
                                        RewardKind::Deterministic, 0),
                 std::invalid_argument);
    EXPECT_THROW(TabularMDP::from_dense(d, std::vector<double>{1, 0, 1, 0}, {0, 0},
                                        RewardKind::Deterministic, 2),
                 std::invalid_argument);
    EXPECT_THROW(TabularMDP::from_dense(d, std::vector<double>{1, 0}, {0, 0},
                                        RewardKind::Deterministic, 0),
                 std::invalid_argument);
    EXPECT_NO_THROW(TabularMDP::from_dense(d, std::vector<double>{1, 0, 0.25, 0.75}, {0, 1},
                                           RewardKind::Deterministic, 1));
}

TEST(TabularMDP, DenseRowRoundTrip) {
    const auto mdp = random_mdp(2, 4, 2, 3);
    const auto row = mdp.transition_row(1, 2, 1);
    double total = 0.0;
    for (double p : row) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
    ASSERT_EQ(row.size(), 4u);
}

}  // namespace
}  // namespace ssr

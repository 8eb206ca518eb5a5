#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ssr/mdp.hpp"
#include "ssr/rng.hpp"

namespace ssr {

/// How deep-sea rewards are stored in the TabularMDP.
///   Raw     stored == original units (identity codec)
///   Affine  stored = (raw - lo) / (hi - lo) with [lo, hi] ⊇ [-1, 1], i.e.
///           (raw + 1) / 2 for the default +1 goal
enum class RewardEncoding { Raw, Affine };

struct DeepSeaSpec {
    int size = 10;
    std::uint64_t mask_seed = 0;
    double goal_reward = 1.0;
    RewardEncoding encoding = RewardEncoding::Raw;
};

/// N x N grid, H = N, two actions. Cell (row, col) is state row * N + col and
/// the episode starts at (0, 0). At every step the agent moves one row down;
/// the action equal to mask(row, col) goes right (col + 1), the other goes
/// left (col - 1, clamped at 0). A right move on the diagonal costs 0.01 / N,
/// and the right move out of the lower-right corner on the last step also
/// pays goal_reward, so "always right" returns goal_reward - 0.01.
/// Moves from the last row stay in the last row.
TabularMDP deep_sea(const DeepSeaSpec& spec);

/// mask[row * N + col] is the action index that means "right" in that cell.
std::vector<int> deep_sea_mask(const DeepSeaSpec& spec);

inline int deep_sea_state(int size, int row, int col) { return row * size + col; }

/// Dirichlet(1) transition rows, uniform [0, 1] mean rewards, Bernoulli
/// realized rewards, s1 = 0.
TabularMDP random_mdp(int horizon, int states, int actions, std::uint64_t seed);

struct StepOutcome {
    int next_state = 0;
    double reward = 0.0;  // stored units
};

StepOutcome step(const TabularMDP& mdp, int h, int s, int a, RngStream& rng);

}  // namespace ssr

#include "ssr/environments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssr {

namespace {

constexpr std::uint64_t kMaskStream = 0x6d61736b;  // "mask"
constexpr std::uint64_t kRandomMdpStream = 0x726d6470;

}  // namespace

std::vector<int> deep_sea_mask(const DeepSeaSpec& spec) {
    if (spec.size < 2) throw std::invalid_argument("deep sea needs N >= 2");
    RngStream rng(mix64(spec.mask_seed ^ mix64(kMaskStream)));
    std::vector<int> mask(static_cast<std::size_t>(spec.size) * spec.size);
    for (auto& m : mask) m = rng.bernoulli(0.5) ? 1 : 0;
    return mask;
}

TabularMDP deep_sea(const DeepSeaSpec& spec) {
    const int N = spec.size;
    const auto mask = deep_sea_mask(spec);
    const Dims dims{N, N * N, 2};
    const double step_cost = 0.01 / N;

    std::vector<double> raw(dims.cells(), 0.0);
    std::vector<std::vector<Transition>> rows(dims.cells());
    for (int h = 0; h < N; ++h) {
        for (int row = 0; row < N; ++row) {
            for (int col = 0; col < N; ++col) {
                const int s = deep_sea_state(N, row, col);
                const int next_row = std::min(row + 1, N - 1);
                for (int a = 0; a < 2; ++a) {
                    const bool right = a == mask[s];
                    const int next_col = right ? std::min(col + 1, N - 1) : std::max(col - 1, 0);
                    const auto cell = dims.index(h, s, a);
                    rows[cell] = {Transition{deep_sea_state(N, next_row, next_col), 1.0}};
                    if (right && row == col) {
                        raw[cell] -= step_cost;
                        if (row == N - 1) raw[cell] += spec.goal_reward;
                    }
                }
            }
        }
    }

    const auto [min_it, max_it] = std::minmax_element(raw.begin(), raw.end());
    RewardCodec codec;
    double lo = std::min(*min_it, 0.0);
    double hi = std::max(*max_it, 0.0);
    std::vector<double> stored = raw;
    if (spec.encoding == RewardEncoding::Affine) {
        lo = std::min(lo, -1.0);
        hi = std::max(hi, 1.0);
        codec = RewardCodec{hi - lo, lo};
        for (auto& r : stored) r = codec.encode_step(r);
        lo = 0.0;
        hi = 1.0;
    }
    return TabularMDP(dims, std::move(rows), std::move(stored), RewardKind::Deterministic,
                      deep_sea_state(N, 0, 0), codec, lo, hi);
}

TabularMDP random_mdp(int horizon, int states, int actions, std::uint64_t seed) {
    if (horizon < 1 || states < 1 || actions < 1) {
        throw std::invalid_argument("random_mdp dimensions must be positive");
    }
    const Dims dims{horizon, states, actions};
    RngStream rng(mix64(seed ^ mix64(kRandomMdpStream)));
    std::vector<std::vector<Transition>> rows(dims.cells());
    std::vector<double> rewards(dims.cells());
    std::vector<double> weights(static_cast<std::size_t>(states));
    for (std::size_t c = 0; c < dims.cells(); ++c) {
        double total = 0.0;
        for (auto& w : weights) {
            w = -std::log(rng.uniform_open_low());
            total += w;
        }
        auto& row = rows[c];
        row.reserve(weights.size());
        for (int s = 0; s < states; ++s) row.push_back({s, weights[s] / total});
        rewards[c] = rng.uniform();
    }
    return TabularMDP(dims, std::move(rows), std::move(rewards), RewardKind::Bernoulli, 0);
}

StepOutcome step(const TabularMDP& mdp, int h, int s, int a, RngStream& rng) {
    if (!mdp.dims().contains(h, s, a)) throw std::out_of_range("step: index out of range");
    const auto succ = mdp.successors(h, s, a);
    StepOutcome out;
    out.next_state = succ.back().next;
    if (succ.size() > 1) {
        const double u = rng.uniform();
        double acc = 0.0;
        for (const auto& t : succ) {
            acc += t.prob;
            if (u < acc) {
                out.next_state = t.next;
                break;
            }
        }
    }
    const double mean = mdp.reward(h, s, a);
    out.reward = mdp.reward_kind() == RewardKind::Bernoulli ? (rng.bernoulli(mean) ? 1.0 : 0.0) : mean;
    return out;
}

}  // namespace ssr

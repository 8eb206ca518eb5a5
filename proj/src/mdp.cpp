#include "ssr/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ssr {

namespace {

void check_dims(const Dims& d) {
    if (d.horizon < 1 || d.states < 1 || d.actions < 1) {
        throw std::invalid_argument("MDP dimensions must be positive");
    }
}

}  // namespace

TabularMDP::TabularMDP(Dims dims, std::vector<std::vector<Transition>> rows,
                       std::vector<double> rewards, RewardKind kind, int initial_state,
                       RewardCodec codec, double reward_lo, double reward_hi)
    : dims_(dims),
      rows_(std::move(rows)),
      rewards_(std::move(rewards)),
      kind_(kind),
      initial_state_(initial_state),
      codec_(codec),
      reward_lo_(reward_lo),
      reward_hi_(reward_hi) {
    check_dims(dims_);
    if (rows_.size() != dims_.cells() || rewards_.size() != dims_.cells()) {
        throw std::invalid_argument("transition/reward tables do not match H*S*A");
    }
    if (initial_state_ < 0 || initial_state_ >= dims_.states) {
        throw std::invalid_argument("initial state out of range");
    }
    if (!(reward_lo_ <= reward_hi_) || codec_.scale == 0.0) {
        throw std::invalid_argument("invalid reward range or codec");
    }
    if (kind_ == RewardKind::Bernoulli && (reward_lo_ < 0.0 || reward_hi_ > 1.0)) {
        throw std::invalid_argument("Bernoulli rewards need a range inside [0, 1]");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        double total = 0.0;
        for (const auto& t : rows_[i]) {
            if (t.next < 0 || t.next >= dims_.states || !(t.prob >= 0.0) || t.prob > 1.0) {
                throw std::invalid_argument("invalid transition entry at cell " +
                                            std::to_string(i));
            }
            total += t.prob;
        }
        if (std::abs(total - 1.0) > kRowSumTolerance) {
            throw std::invalid_argument("transition row " + std::to_string(i) +
                                        " does not sum to 1");
        }
        const double r = rewards_[i];
        if (!(r >= reward_lo_ && r <= reward_hi_)) {
            throw std::invalid_argument("mean reward out of range at cell " +
                                        std::to_string(i));
        }
    }
}

TabularMDP TabularMDP::from_dense(Dims dims, std::span<const double> transitions,
                                  std::vector<double> rewards, RewardKind kind,
                                  int initial_state) {
    check_dims(dims);
    const auto S = static_cast<std::size_t>(dims.states);
    if (transitions.size() != dims.cells() * S) {
        throw std::invalid_argument("dense transition table must hold H*S*A*S entries");
    }
    std::vector<std::vector<Transition>> rows(dims.cells());
    for (std::size_t c = 0; c < rows.size(); ++c) {
        for (std::size_t next = 0; next < S; ++next) {
            const double p = transitions[c * S + next];
            if (p != 0.0) rows[c].push_back({static_cast<int>(next), p});
        }
    }
    return TabularMDP(dims, std::move(rows), std::move(rewards), kind, initial_state);
}

std::vector<double> TabularMDP::transition_row(int h, int s, int a) const {
    std::vector<double> row(static_cast<std::size_t>(dims_.states), 0.0);
    for (const auto& t : successors(h, s, a)) row[t.next] += t.prob;
    return row;
}

int argmax(std::span<const double> row) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(row.size()); ++a) {
        if (row[a] > row[best]) best = a;
    }
    return best;
}

OptimalSolution optimal_values(const TabularMDP& mdp) {
    const Dims& d = mdp.dims();
    OptimalSolution out{ValueTable(d), Policy(d.horizon, d.states)};
    auto& vt = out.values;
    for (int h = d.horizon - 1; h >= 0; --h) {
        const auto next = vt.values_at(h + 1);
        for (int s = 0; s < d.states; ++s) {
            for (int a = 0; a < d.actions; ++a) {
                double q = mdp.reward(h, s, a);
                for (const auto& t : mdp.successors(h, s, a)) q += t.prob * next[t.next];
                vt.action_value(h, s, a) = q;
            }
            const int best = argmax(vt.action_values(h, s));
            out.policy.at(h, s) = best;
            vt.value(h, s) = vt.action_value(h, s, best);
        }
    }
    return out;
}

ValueTable policy_values(const TabularMDP& mdp, const Policy& policy) {
    const Dims& d = mdp.dims();
    if (policy.horizon != d.horizon || policy.states != d.states) {
        throw std::invalid_argument("policy shape does not match MDP");
    }
    ValueTable vt(d);
    for (int h = d.horizon - 1; h >= 0; --h) {
        const auto next = vt.values_at(h + 1);
        for (int s = 0; s < d.states; ++s) {
            for (int a = 0; a < d.actions; ++a) {
                double q = mdp.reward(h, s, a);
                for (const auto& t : mdp.successors(h, s, a)) q += t.prob * next[t.next];
                vt.action_value(h, s, a) = q;
            }
            const int a = policy.at(h, s);
            if (a < 0 || a >= d.actions) throw std::invalid_argument("policy action out of range");
            vt.value(h, s) = vt.action_value(h, s, a);
        }
    }
    return vt;
}

double variance(std::span<const double> dist, std::span<const double> values) {
    if (dist.size() != values.size()) {
        throw std::invalid_argument("variance: distribution and values differ in length");
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) mean += dist[i] * values[i];
    double var = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double dev = values[i] - mean;
        var += dist[i] * dev * dev;
    }
    return std::max(var, 0.0);
}

double clip(double threshold, double x) {
    if (!(threshold >= 0.0)) throw std::invalid_argument("clip threshold must be nonnegative");
    return std::max(-threshold, std::min(threshold, x));
}

}  // namespace ssr

#pragma once

// Time-inhomogeneous finite-horizon tabular MDPs and exact backward-induction
// planners.
//
// Steps are 0-based throughout the library: h ranges over [0, H) and the
// value table carries one extra terminal row V[H] = 0. A quantity that is
// written with the 1-based "H - h + 1" remaining-steps count therefore reads
// `H - h` here.

#include <cstdint>
#include <span>
#include <vector>

namespace ssr {

struct Dims {
    int horizon = 0;
    int states = 0;
    int actions = 0;

    std::size_t cells() const {
        return static_cast<std::size_t>(horizon) * states * actions;
    }
    std::size_t index(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * states + s) * actions + a;
    }
    bool contains(int h, int s, int a) const {
        return h >= 0 && h < horizon && s >= 0 && s < states && a >= 0 && a < actions;
    }
    friend bool operator==(const Dims&, const Dims&) = default;
};

enum class RewardKind { Deterministic, Bernoulli };

/// Affine map from stored reward units to the environment's original units:
/// raw = scale * stored + offset, per step.
struct RewardCodec {
    double scale = 1.0;
    double offset = 0.0;

    double decode_step(double stored) const { return scale * stored + offset; }
    double encode_step(double raw) const { return (raw - offset) / scale; }
    /// Decodes a value accumulated over `steps` rewards.
    double decode_return(double stored, int steps) const {
        return scale * stored + offset * steps;
    }
    /// Differences of returns (regret) only see the scale.
    double decode_gap(double stored_gap) const { return scale * stored_gap; }

    bool is_identity() const { return scale == 1.0 && offset == 0.0; }
};

struct Transition {
    int next = 0;
    double prob = 0.0;
};

/// Ground-truth MDP (H, S, A, P, R, s1). Transition rows are kept sparse so
/// that large deterministic grids stay cheap to evaluate.
class TabularMDP {
public:
    static constexpr double kRowSumTolerance = 1e-9;

    /// `rows[dims.index(h, s, a)]` lists the nonzero successors of (h, s, a).
    /// Rewards are mean rewards in stored units and must lie within
    /// [reward_lo, reward_hi].
    TabularMDP(Dims dims, std::vector<std::vector<Transition>> rows,
               std::vector<double> rewards, RewardKind kind, int initial_state,
               RewardCodec codec = {}, double reward_lo = 0.0, double reward_hi = 1.0);

    /// Dense construction: `transitions` is H*S*A rows of length S.
    static TabularMDP from_dense(Dims dims, std::span<const double> transitions,
                                 std::vector<double> rewards, RewardKind kind,
                                 int initial_state);

    const Dims& dims() const { return dims_; }
    int horizon() const { return dims_.horizon; }
    int states() const { return dims_.states; }
    int actions() const { return dims_.actions; }
    int initial_state() const { return initial_state_; }
    RewardKind reward_kind() const { return kind_; }
    const RewardCodec& codec() const { return codec_; }
    double reward_lo() const { return reward_lo_; }
    double reward_hi() const { return reward_hi_; }

    double reward(int h, int s, int a) const { return rewards_[dims_.index(h, s, a)]; }
    std::span<const Transition> successors(int h, int s, int a) const {
        return rows_[dims_.index(h, s, a)];
    }
    /// Dense probability vector over next states.
    std::vector<double> transition_row(int h, int s, int a) const;

private:
    Dims dims_;
    std::vector<std::vector<Transition>> rows_;
    std::vector<double> rewards_;
    RewardKind kind_;
    int initial_state_;
    RewardCodec codec_;
    double reward_lo_;
    double reward_hi_;
};

/// V is (H+1) x S with V[H] = 0; Q is H x S x A.
struct ValueTable {
    Dims dims;
    std::vector<double> v;
    std::vector<double> q;

    explicit ValueTable(Dims d = {})
        : dims(d),
          v(static_cast<std::size_t>(d.horizon + 1) * d.states, 0.0),
          q(d.cells(), 0.0) {}

    double& value(int h, int s) { return v[static_cast<std::size_t>(h) * dims.states + s]; }
    double value(int h, int s) const { return v[static_cast<std::size_t>(h) * dims.states + s]; }
    double& action_value(int h, int s, int a) { return q[dims.index(h, s, a)]; }
    double action_value(int h, int s, int a) const { return q[dims.index(h, s, a)]; }

    std::span<const double> values_at(int h) const {
        return {v.data() + static_cast<std::size_t>(h) * dims.states,
                static_cast<std::size_t>(dims.states)};
    }
    std::span<const double> action_values(int h, int s) const {
        return {q.data() + dims.index(h, s, 0), static_cast<std::size_t>(dims.actions)};
    }
};

/// Deterministic policy: one action per (h, s).
struct Policy {
    int horizon = 0;
    int states = 0;
    std::vector<int> actions;

    Policy() = default;
    Policy(int h, int s, int fill = 0)
        : horizon(h), states(s), actions(static_cast<std::size_t>(h) * s, fill) {}

    int& at(int h, int s) { return actions[static_cast<std::size_t>(h) * states + s]; }
    int at(int h, int s) const { return actions[static_cast<std::size_t>(h) * states + s]; }

    friend bool operator==(const Policy&, const Policy&) = default;
};

struct OptimalSolution {
    ValueTable values;
    Policy policy;
};

/// Index of the largest entry, smallest index on ties.
int argmax(std::span<const double> row);

OptimalSolution optimal_values(const TabularMDP& mdp);
ValueTable policy_values(const TabularMDP& mdp, const Policy& policy);

/// sum_s dist(s) * (values(s) - <dist, values>)^2, clamped at 0. Deficient
/// distributions are used as given.
double variance(std::span<const double> dist, std::span<const double> values);

/// max(-threshold, min(threshold, x)).
double clip(double threshold, double x);

}  // namespace ssr

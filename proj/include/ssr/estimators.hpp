#pragma once

// Visit counts and running sums behind the empirical model. Estimates are
// recomputed from raw sums on every query:
//   r_hat   = reward_sum / (n + 1)
//   p_hat   = trans_count / (n + 1)        (deficient row, sums to n/(n+1))
//   p_tilde = trans_count / max(n, 1)      (proper row once visited)

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssr/mdp.hpp"

namespace ssr {

struct Step {
    int state = 0;
    int action = 0;
    double reward = 0.0;  // stored units
};

/// One trajectory of exactly H steps plus the state reached after the last
/// step. `k` is the 1-based episode index.
struct EpisodeRecord {
    std::int64_t k = 0;
    std::vector<Step> steps;
    int final_state = 0;
};

struct SuccessorCount {
    int next = 0;
    std::int64_t count = 0;
};

class EmpiricalModel {
public:
    explicit EmpiricalModel(Dims dims);

    const Dims& dims() const { return dims_; }
    /// Index of the episode about to be played (1-based).
    std::int64_t episode() const { return k_; }

    void update(const EpisodeRecord& episode);

    std::int64_t visits(int h, int s, int a) const { return n_[dims_.index(h, s, a)]; }
    double reward_sum(int h, int s, int a) const { return reward_sum_[dims_.index(h, s, a)]; }
    std::int64_t trans_count(int h, int s, int a, int next) const;
    /// Observed successors of (h, s, a), sorted by next-state index.
    std::span<const SuccessorCount> successors(int h, int s, int a) const {
        return trans_[dims_.index(h, s, a)];
    }

    double r_hat(int h, int s, int a) const;
    std::vector<double> p_hat(int h, int s, int a) const;
    std::vector<double> p_tilde(int h, int s, int a) const;

    /// {"k": ..., "n": {"h,s,a": count, ...}} over visited cells.
    std::string counts_json() const;

    /// Test fixture support: overwrites the raw sums of one cell. The
    /// successor counts must add up to `visits`.
    void set_cell(int h, int s, int a, std::int64_t visits, double reward_sum,
                  std::vector<SuccessorCount> successors);

private:
    Dims dims_;
    std::int64_t k_ = 1;
    std::vector<std::int64_t> n_;
    std::vector<double> reward_sum_;
    std::vector<std::vector<SuccessorCount>> trans_;
};

}  // namespace ssr

#pragma once

// Randomized and optimistic planners over the empirical model.
//
//   ssr    one Gaussian seed z_k per episode shared by every (h, s, a)
//   rlsvi  an independent Gaussian per (h, s, a) per episode
//   ucbvi  deterministic Hoeffding bonus with [0, H - h] truncation
//
// All planners run backward induction on r_hat / p_hat and return the
// perturbed Q table together with the greedy policy.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssr/estimators.hpp"
#include "ssr/mdp.hpp"
#include "ssr/rng.hpp"

namespace ssr {

enum class NoiseKind { Hoeffding, Bernstein };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Hoeffding;
    /// Multiplier on sigma.
    double scale = 1.0;
    /// When set, every sigma(h, s, a) is replaced by this value (before
    /// scaling). Used for noise-accounting experiments.
    std::optional<double> constant_sigma;

    void validate() const;
};

/// Deep-sea configurations scale the theoretical magnitudes down by 7e4.
inline constexpr double kDeepSeaNoiseScale = 1.0 / 70000.0;

enum class Algorithm { SsrHoeffding, SsrBernstein, RlsviHoeffding, RlsviBernstein, UcbviHoeffding };

std::optional<Algorithm> parse_algorithm(std::string_view id);
std::string_view algorithm_id(Algorithm algo);
NoiseKind noise_kind_of(Algorithm algo);

struct PlanResult {
    Dims dims;
    std::vector<double> q_bar;   // H x S x A
    std::vector<double> v_bar;   // (H+1) x S, clipped / truncated
    std::vector<double> sigma;   // H x S x A, scaled magnitude actually applied
    std::vector<double> noise;   // H x S x A, realized perturbation sigma * z
    Policy policy;
    /// Gaussian draws used: one entry for ssr, H*S*A entries (cell order) for
    /// rlsvi, empty for ucbvi.
    std::vector<double> z;
    /// (h, s) pairs where max_a Q_bar fell outside the planner's value range
    /// (two-sided 2(H - h) for ssr/rlsvi, [0, H - h] for ucbvi).
    std::vector<std::pair<int, int>> clip_events;

    double q(int h, int s, int a) const { return q_bar[dims.index(h, s, a)]; }
    double v(int h, int s) const { return v_bar[static_cast<std::size_t>(h) * dims.states + s]; }
    std::span<const double> q_row(int h, int s) const {
        return {q_bar.data() + dims.index(h, s, 0), static_cast<std::size_t>(dims.actions)};
    }
    std::span<const double> v_at(int h) const {
        return {v_bar.data() + static_cast<std::size_t>(h) * dims.states,
                static_cast<std::size_t>(dims.states)};
    }
};

/// ln(2 H S A k^2).
double confidence_log(const Dims& dims, std::int64_t k);

/// Hoeffding magnitude: H sqrt(L / (n+1)) + H / (n+1).
double sigma_ho(const Dims& dims, std::int64_t k, std::int64_t n);

/// Bernstein magnitude:
///   sqrt(16 Var(p_tilde, v_next) L / (n+1)) + 65 H L / (n+1) + sqrt(L / (n+1)).
double sigma_be(const Dims& dims, std::int64_t k, std::int64_t n,
                std::span<const double> p_tilde_row, std::span<const double> v_next);

struct PlannerOptions {
    NoiseSpec noise;
    /// rlsvi only: apply the same two-sided clip as ssr.
    bool rlsvi_clip = true;
};

/// Single-seed planner with the seed supplied by the caller.
PlanResult ssr_plan_with_seed(const EmpiricalModel& model, const Dims& true_dims,
                              const NoiseSpec& noise, double z);
PlanResult ssr_plan(const EmpiricalModel& model, const Dims& true_dims, const NoiseSpec& noise,
                    RngStream& rng);

/// Independent-seed planner; `z` holds one draw per (h, s, a) in cell order.
PlanResult rlsvi_plan_with_noise(const EmpiricalModel& model, const Dims& true_dims,
                                 const NoiseSpec& noise, std::span<const double> z,
                                 bool clip_values = true);
PlanResult rlsvi_plan(const EmpiricalModel& model, const Dims& true_dims, const NoiseSpec& noise,
                      RngStream& rng, bool clip_values = true);

/// Deterministic optimistic planner; only the scale of `noise` is used and
/// the bonus is always Hoeffding-type.
PlanResult ucbvi_plan(const EmpiricalModel& model, const Dims& true_dims, const NoiseSpec& noise = {});

/// Dispatch on the algorithm id.
PlanResult plan(Algorithm algo, const PlannerOptions& options, const EmpiricalModel& model,
                const Dims& true_dims, RngStream& rng);

/// Greedy action of the plan, smallest index on ties.
int act(const PlanResult& plan, int h, int s);

}  // namespace ssr

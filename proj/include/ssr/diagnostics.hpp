#pragma once

// Runtime checks of the events used by the regret analysis: noise envelopes,
// confidence widths, good-event membership, optimism and pessimism. All of
// them read V* of the true MDP, so they only make sense for synthetic
// environments and never feed back into the agents.

#include <cstdint>
#include <span>

#include "ssr/agents.hpp"
#include "ssr/estimators.hpp"
#include "ssr/mdp.hpp"

namespace ssr {

/// Standard normal CDF.
double normal_cdf(double x);

struct TheoryConstants {
    double c_ho;  // Phi(1.9) - Phi(1)
    double c_be;  // Phi(1.5) - Phi(1)
    double c1;    // 1 / c_be

    static TheoryConstants compute();
};

/// 200 H^2 ln(2 H S A k^2) ln(40 k^4).
double alpha_k(int horizon, int states, int actions, std::int64_t k);

/// sigma * sqrt(ln(40 k^4)).
double gamma_k(double sigma, std::int64_t k);

/// sqrt(e_ty) for one cell.
///   Ho: H sqrt(L/(n+1)) + H/(n+1)
///   Be: sqrt(6 Var(p_tilde, V*_{h+1}) L/(n+1)) + 9 H L/(n+1) + sqrt(L/(n+1))
double conf_width(NoiseKind kind, const Dims& dims, std::int64_t k, std::int64_t n,
                  std::span<const double> p_tilde_row, std::span<const double> v_star_next);

/// True iff every cell satisfies
///   |(r_hat - R) + <p_hat - P, V*_{h+1}>| <= sqrt(e_ty)
/// in stored reward units, at the model's current episode index.
bool good_event(const EmpiricalModel& model, const TabularMDP& mdp, const ValueTable& v_star,
                NoiseKind kind);

/// |w(h, s, a)| <= gamma_k(sigma(h, s, a)) for every cell of the plan.
bool noise_envelope(const PlanResult& plan, std::int64_t k);

/// V_bar(h, s) >= V*(h, s) - 1e-12 for all h < H and all s.
bool optimism_flag(std::span<const double> v_bar, std::span<const double> v_star);
/// V_bar(h, s) <= V*(h, s) + 1e-12 for all h < H and all s.
bool pessimism_flag(std::span<const double> v_bar, std::span<const double> v_star);

}  // namespace ssr

#include "ssr/agents.hpp"

#include <cmath>
#include <stdexcept>

namespace ssr {

void NoiseSpec::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("noise scale must be positive and finite");
    }
    if (constant_sigma && !(*constant_sigma >= 0.0)) {
        throw std::invalid_argument("constant sigma must be nonnegative");
    }
}

namespace {

constexpr std::pair<Algorithm, std::string_view> kAlgorithmIds[] = {
    {Algorithm::SsrHoeffding, "ssr_ho"},
    {Algorithm::SsrBernstein, "ssr_be"},
    {Algorithm::RlsviHoeffding, "rlsvi_ho"},
    {Algorithm::RlsviBernstein, "rlsvi_be"},
    {Algorithm::UcbviHoeffding, "ucbvi_ho"},
};

enum class ValueRange { TwoSidedClip, Unclipped, OptimisticTruncation };

void check_model(const EmpiricalModel& model, const Dims& true_dims) {
    if (!(model.dims() == true_dims)) {
        throw std::invalid_argument("empirical model dimensions differ from environment");
    }
    if (model.episode() < 1) throw std::invalid_argument("episode index must be >= 1");
}

// Backward induction shared by every planner. `draw(cell)` returns the
// standard-normal multiplier for that cell; a null draw means no noise is
// added on top of the bonus (ucbvi adds the magnitude itself).
template <typename Draw>
PlanResult backward_induction(const EmpiricalModel& model, const NoiseSpec& noise,
                              ValueRange range, bool additive_bonus, Draw&& draw) {
    noise.validate();
    const Dims& d = model.dims();
    const double H = d.horizon;
    const double log_term = confidence_log(d, model.episode());

    PlanResult out;
    out.dims = d;
    out.q_bar.assign(d.cells(), 0.0);
    out.sigma.assign(d.cells(), 0.0);
    out.noise.assign(d.cells(), 0.0);
    out.v_bar.assign(static_cast<std::size_t>(d.horizon + 1) * d.states, 0.0);
    out.policy = Policy(d.horizon, d.states);

    for (int h = d.horizon - 1; h >= 0; --h) {
        const double* next = out.v_bar.data() + static_cast<std::size_t>(h + 1) * d.states;
        const double remaining = static_cast<double>(d.horizon - h);
        for (int s = 0; s < d.states; ++s) {
            for (int a = 0; a < d.actions; ++a) {
                const auto cell = d.index(h, s, a);
                const auto n = model.visits(h, s, a);
                const double denom = static_cast<double>(n + 1);
                const auto succ = model.successors(h, s, a);

                double expected_next = 0.0;
                for (const auto& c : succ) {
                    expected_next += (static_cast<double>(c.count) / denom) * next[c.next];
                }

                double sigma;
                if (noise.constant_sigma) {
                    sigma = *noise.constant_sigma;
                } else if (noise.kind == NoiseKind::Hoeffding) {
                    sigma = H * std::sqrt(log_term / denom) + H / denom;
                } else {
                    // Var(p_tilde, V_bar_{h+1}) over the observed successors.
                    const double tilde_denom = static_cast<double>(n > 0 ? n : 1);
                    double mean = 0.0;
                    for (const auto& c : succ) {
                        mean += (static_cast<double>(c.count) / tilde_denom) * next[c.next];
                    }
                    double var = 0.0;
                    for (const auto& c : succ) {
                        const double dev = next[c.next] - mean;
                        var += (static_cast<double>(c.count) / tilde_denom) * dev * dev;
                    }
                    if (var < 0.0) var = 0.0;
                    sigma = std::sqrt(16.0 * var * log_term / denom) + 65.0 * H * log_term / denom +
                            std::sqrt(log_term / denom);
                }
                const double applied = noise.scale * sigma;
                const double w = additive_bonus ? applied : applied * draw(cell);

                out.sigma[cell] = applied;
                out.noise[cell] = w;
                out.q_bar[cell] = model.r_hat(h, s, a) + expected_next + w;
            }

            const auto row = out.q_row(h, s);
            const int best = argmax(row);
            out.policy.at(h, s) = best;
            const double top = row[best];
            double v = top;
            switch (range) {
                case ValueRange::TwoSidedClip: {
                    const double level = 2.0 * remaining;
                    v = clip(level, top);
                    if (std::abs(top) > level) out.clip_events.emplace_back(h, s);
                    break;
                }
                case ValueRange::OptimisticTruncation:
                    v = std::max(0.0, std::min(remaining, top));
                    if (top > remaining || top < 0.0) out.clip_events.emplace_back(h, s);
                    break;
                case ValueRange::Unclipped:
                    break;
            }
            out.v_bar[static_cast<std::size_t>(h) * d.states + s] = v;
        }
    }
    return out;
}

}  // namespace

std::optional<Algorithm> parse_algorithm(std::string_view id) {
    for (const auto& [algo, name] : kAlgorithmIds) {
        if (name == id) return algo;
    }
    return std::nullopt;
}

std::string_view algorithm_id(Algorithm algo) {
    for (const auto& [a, name] : kAlgorithmIds) {
        if (a == algo) return name;
    }
    return "unknown";
}

NoiseKind noise_kind_of(Algorithm algo) {
    return algo == Algorithm::SsrBernstein || algo == Algorithm::RlsviBernstein
               ? NoiseKind::Bernstein
               : NoiseKind::Hoeffding;
}

double confidence_log(const Dims& dims, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("episode index must be >= 1");
    const double kk = static_cast<double>(k);
    return std::log(2.0 * dims.horizon * dims.states * dims.actions * kk * kk);
}

double sigma_ho(const Dims& dims, std::int64_t k, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("visit count must be nonnegative");
    const double H = dims.horizon;
    const double denom = static_cast<double>(n + 1);
    return H * std::sqrt(confidence_log(dims, k) / denom) + H / denom;
}

double sigma_be(const Dims& dims, std::int64_t k, std::int64_t n,
                std::span<const double> p_tilde_row, std::span<const double> v_next) {
    if (n < 0) throw std::invalid_argument("visit count must be nonnegative");
    const double var = variance(p_tilde_row, v_next);
    const double L = confidence_log(dims, k);
    const double denom = static_cast<double>(n + 1);
    return std::sqrt(16.0 * var * L / denom) + 65.0 * dims.horizon * L / denom +
           std::sqrt(L / denom);
}

PlanResult ssr_plan_with_seed(const EmpiricalModel& model, const Dims& true_dims,
                              const NoiseSpec& noise, double z) {
    check_model(model, true_dims);
    auto out = backward_induction(model, noise, ValueRange::TwoSidedClip, false,
                                  [z](std::size_t) { return z; });
    out.z = {z};
    return out;
}

PlanResult ssr_plan(const EmpiricalModel& model, const Dims& true_dims, const NoiseSpec& noise,
                    RngStream& rng) {
    check_model(model, true_dims);
    noise.validate();
    return ssr_plan_with_seed(model, true_dims, noise, rng.gaussian());
}

PlanResult rlsvi_plan_with_noise(const EmpiricalModel& model, const Dims& true_dims,
                                 const NoiseSpec& noise, std::span<const double> z,
                                 bool clip_values) {
    check_model(model, true_dims);
    if (z.size() != true_dims.cells()) {
        throw std::invalid_argument("rlsvi needs one Gaussian draw per (h, s, a)");
    }
    auto out = backward_induction(model, noise,
                                  clip_values ? ValueRange::TwoSidedClip : ValueRange::Unclipped,
                                  false, [z](std::size_t cell) { return z[cell]; });
    out.z.assign(z.begin(), z.end());
    return out;
}

PlanResult rlsvi_plan(const EmpiricalModel& model, const Dims& true_dims, const NoiseSpec& noise,
                      RngStream& rng, bool clip_values) {
    check_model(model, true_dims);
    noise.validate();
    std::vector<double> z(true_dims.cells());
    for (auto& v : z) v = rng.gaussian();
    return rlsvi_plan_with_noise(model, true_dims, noise, z, clip_values);
}

PlanResult ucbvi_plan(const EmpiricalModel& model, const Dims& true_dims, const NoiseSpec& noise) {
    check_model(model, true_dims);
    NoiseSpec bonus = noise;
    bonus.kind = NoiseKind::Hoeffding;
    return backward_induction(model, bonus, ValueRange::OptimisticTruncation, true,
                              [](std::size_t) { return 1.0; });
}

PlanResult plan(Algorithm algo, const PlannerOptions& options, const EmpiricalModel& model,
                const Dims& true_dims, RngStream& rng) {
    NoiseSpec noise = options.noise;
    noise.kind = noise_kind_of(algo);
    switch (algo) {
        case Algorithm::SsrHoeffding:
        case Algorithm::SsrBernstein:
            return ssr_plan(model, true_dims, noise, rng);
        case Algorithm::RlsviHoeffding:
        case Algorithm::RlsviBernstein:
            return rlsvi_plan(model, true_dims, noise, rng, options.rlsvi_clip);
        case Algorithm::UcbviHoeffding:
            return ucbvi_plan(model, true_dims, noise);
    }
    throw std::invalid_argument("unknown algorithm");
}

int act(const PlanResult& plan, int h, int s) {
    if (!plan.dims.contains(h, s, 0)) throw std::out_of_range("act: index out of range");
    return argmax(plan.q_row(h, s));
}

}  // namespace ssr

#include "ssr/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ssr {

namespace {

constexpr double kFlagSlack = 1e-12;

void check_shapes(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("value tables differ in shape");
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

TheoryConstants TheoryConstants::compute() {
    TheoryConstants c{};
    c.c_ho = normal_cdf(1.9) - normal_cdf(1.0);
    c.c_be = normal_cdf(1.5) - normal_cdf(1.0);
    c.c1 = 1.0 / c.c_be;
    return c;
}

double alpha_k(int horizon, int states, int actions, std::int64_t k) {
    const double H = horizon;
    const double kk = static_cast<double>(k);
    const double L = confidence_log(Dims{horizon, states, actions}, k);
    return 200.0 * H * H * L * std::log(40.0 * kk * kk * kk * kk);
}

double gamma_k(double sigma, std::int64_t k) {
    if (sigma < 0.0) throw std::invalid_argument("gamma_k: sigma must be nonnegative");
    if (k < 1) throw std::invalid_argument("gamma_k: k must be >= 1");
    const double kk = static_cast<double>(k);
    return sigma * std::sqrt(std::log(40.0 * kk * kk * kk * kk));
}

double conf_width(NoiseKind kind, const Dims& dims, std::int64_t k, std::int64_t n,
                  std::span<const double> p_tilde_row, std::span<const double> v_star_next) {
    const double L = confidence_log(dims, k);
    const double denom = static_cast<double>(n + 1);
    const double H = dims.horizon;
    if (kind == NoiseKind::Hoeffding) return H * std::sqrt(L / denom) + H / denom;
    const double var = variance(p_tilde_row, v_star_next);
    return std::sqrt(6.0 * var * L / denom) + 9.0 * H * L / denom + std::sqrt(L / denom);
}

bool good_event(const EmpiricalModel& model, const TabularMDP& mdp, const ValueTable& v_star,
                NoiseKind kind) {
    const Dims& d = mdp.dims();
    if (!(model.dims() == d) || !(v_star.dims == d)) {
        throw std::invalid_argument("good_event: dimension mismatch");
    }
    const auto k = model.episode();
    const double L = confidence_log(d, k);
    const double H = d.horizon;
    for (int h = 0; h < d.horizon; ++h) {
        const auto next = v_star.values_at(h + 1);
        for (int s = 0; s < d.states; ++s) {
            for (int a = 0; a < d.actions; ++a) {
                const auto n = model.visits(h, s, a);
                const double denom = static_cast<double>(n + 1);
                double emp = 0.0;
                for (const auto& c : model.successors(h, s, a)) {
                    emp += (static_cast<double>(c.count) / denom) * next[c.next];
                }
                double truth = 0.0;
                for (const auto& t : mdp.successors(h, s, a)) truth += t.prob * next[t.next];
                const double deviation = (model.r_hat(h, s, a) - mdp.reward(h, s, a)) + (emp - truth);

                double width;
                if (kind == NoiseKind::Hoeffding) {
                    width = H * std::sqrt(L / denom) + H / denom;
                } else {
                    const double tilde = static_cast<double>(n > 0 ? n : 1);
                    double mean = 0.0;
                    for (const auto& c : model.successors(h, s, a)) {
                        mean += (static_cast<double>(c.count) / tilde) * next[c.next];
                    }
                    double var = 0.0;
                    for (const auto& c : model.successors(h, s, a)) {
                        const double dev = next[c.next] - mean;
                        var += (static_cast<double>(c.count) / tilde) * dev * dev;
                    }
                    if (var < 0.0) var = 0.0;
                    width = std::sqrt(6.0 * var * L / denom) + 9.0 * H * L / denom +
                            std::sqrt(L / denom);
                }
                if (std::abs(deviation) > width) return false;
            }
        }
    }
    return true;
}

bool noise_envelope(const PlanResult& plan, std::int64_t k) {
    for (std::size_t c = 0; c < plan.noise.size(); ++c) {
        if (std::abs(plan.noise[c]) > gamma_k(plan.sigma[c], k)) return false;
    }
    return true;
}

bool optimism_flag(std::span<const double> v_bar, std::span<const double> v_star) {
    check_shapes(v_bar, v_star);
    for (std::size_t i = 0; i < v_bar.size(); ++i) {
        if (v_bar[i] < v_star[i] - kFlagSlack) return false;
    }
    return true;
}

bool pessimism_flag(std::span<const double> v_bar, std::span<const double> v_star) {
    check_shapes(v_bar, v_star);
    for (std::size_t i = 0; i < v_bar.size(); ++i) {
        if (v_bar[i] > v_star[i] + kFlagSlack) return false;
    }
    return true;
}

}  // namespace ssr

// Acceptance checks. Prints one "PASS|FAIL <name>: <detail>" line per
// criterion and exits non-zero if any criterion fails.
//
//   ssr_acceptance [--only NAME] [--ssrlab PATH] [--workdir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../unit/oracles.hpp"
#include "ssr/agents.hpp"
#include "ssr/diagnostics.hpp"
#include "ssr/environments.hpp"
#include "ssr/harness.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Context {
    std::string ssrlab;
    fs::path workdir;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

// Deep sea N = 10 at the downscaled noise magnitude, shared by the
// comparison criteria.
ssr::ExperimentConfig deep_sea_comparison(const std::string& algo) {
    ssr::ExperimentConfig c;
    c.env.deep_sea.size = 10;
    c.algorithm = algo;
    c.episodes = 50000;
    c.trials = 10;
    c.base_seed = 1;
    c.noise_scale = ssr::kDeepSeaNoiseScale;
    c.threads = 0;
    return c;
}

// The fixed small MDP used by the statistical criteria.
ssr::ExperimentConfig small_random_mdp(std::int64_t episodes) {
    ssr::ExperimentConfig c;
    c.env.kind = ssr::EnvKind::Random;
    c.env.horizon = 3;
    c.env.states = 2;
    c.env.actions = 2;
    c.env.seed = 11;
    c.algorithm = "ssr_be";
    c.episodes = episodes;
    c.trials = 1;
    c.base_seed = 3;
    c.noise_scale = 1.0;
    c.diagnostics = true;
    return c;
}

std::vector<double> final_regret(const ssr::RegretCurve& curve) {
    std::vector<double> out;
    for (const auto& cum : curve.cumulative) out.push_back(cum.back());
    return out;
}

int paired_wins(const std::vector<double>& a, const std::vector<double>& b) {
    int wins = 0;
    for (std::size_t t = 0; t < a.size(); ++t) wins += a[t] < b[t];
    return wins;
}

Outcome dp_oracle(const Context&) {
    const auto start = Clock::now();
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int h = 1 + static_cast<int>(seed % 3);
        const int s = 1 + static_cast<int>((seed / 3) % 3);
        const int a = 1 + static_cast<int>((seed / 9) % 2);
        const auto mdp = ssr::random_mdp(h, s, a, 5000 + seed);
        const double dp = ssr::optimal_values(mdp).values.value(0, mdp.initial_state());
        worst = std::max(worst, std::abs(dp - ssr::testing::brute_force_optimum(mdp)));
    }
    const double took = seconds_since(start);
    return {worst <= 1e-10 && took < 10.0,
            "200 MDPs, max |dp - enumeration| = " + fmt(worst) + ", " + fmt(took) + " s"};
}

Outcome deep_sea_value(const Context&) {
    double worst = 0.0;
    for (int n : {2, 5, 10, 25}) {
        for (auto enc : {ssr::RewardEncoding::Raw, ssr::RewardEncoding::Affine}) {
            const auto mdp = ssr::deep_sea({.size = n, .mask_seed = 0, .encoding = enc});
            const double v = ssr::optimal_values(mdp).values.value(0, mdp.initial_state());
            worst = std::max(worst, std::abs(mdp.codec().decode_return(v, n) - 0.99));
        }
    }
    return {worst <= 1e-12, "N in {2,5,10,25}, raw and affine, max |V - 0.99| = " + fmt(worst)};
}

Outcome clipping(const Context&) {
    // At the deep-sea scale the clip never binds, so the full-magnitude run
    // is what actually exercises it.
    long violations = 0, checked = 0, clip_events = 0;
    for (double scale : {ssr::kDeepSeaNoiseScale, 1.0}) {
        auto config = deep_sea_comparison("ssr_be");
        config.episodes = 20000;
        config.trials = 1;
        config.noise_scale = scale;
        const auto env = ssr::build_environment(config.env);
        const auto inner = ssr::make_planner(config, env.dims());
        const int H = env.horizon();
        const ssr::Planner audited = [&](const ssr::EmpiricalModel& m, ssr::RngStream& rng) {
            auto plan = inner(m, rng);
            for (int h = 0; h <= H; ++h) {
                for (double v : plan.v_at(h)) {
                    ++checked;
                    if (std::abs(v) > 2.0 * (H - h)) ++violations;
                }
            }
            clip_events += static_cast<long>(plan.clip_events.size());
            return plan;
        };
        ssr::run_experiment(config, audited);
    }
    return {violations == 0 && checked > 0 && clip_events > 0,
            std::to_string(checked) + " values checked over two noise scales, " +
                std::to_string(violations) + " violations, " + std::to_string(clip_events) +
                " clip events"};
}

Outcome single_seed(const Context&) {
    const auto env = ssr::deep_sea({.size = 10});
    const auto dims = env.dims();
    long bad_ssr = 0, bad_rlsvi = 0, episodes = 0;
    for (const char* algo : {"ssr_ho", "ssr_be", "rlsvi_ho", "rlsvi_be"}) {
        auto config = deep_sea_comparison(algo);
        config.episodes = 2000;
        config.trials = 2;
        const auto inner = ssr::make_planner(config, dims);
        const bool single = std::string(algo).starts_with("ssr");
        const ssr::Planner audited = [&](const ssr::EmpiricalModel& m, ssr::RngStream& rng) {
            const auto before = rng.gaussians_drawn();
            auto plan = inner(m, rng);
            const auto drawn = rng.gaussians_drawn() - before;
            ++episodes;
            if (single) {
                bool ok = plan.z.size() == 1 && drawn == 1;
                for (std::size_t i = 0; ok && i < plan.noise.size(); ++i) {
                    ok = plan.noise[i] == plan.sigma[i] * plan.z[0];
                }
                bad_ssr += !ok;
            } else {
                bad_rlsvi += drawn != dims.cells() || plan.z.size() != dims.cells();
            }
            return plan;
        };
        ssr::run_experiment(config, audited);
    }
    return {bad_ssr == 0 && bad_rlsvi == 0 && episodes == 16000,
            std::to_string(episodes) + " episodes, " + std::to_string(bad_ssr) +
                " ssr episodes without a shared seed, " + std::to_string(bad_rlsvi) +
                " rlsvi episodes without H*S*A draws"};
}

Outcome determinism(const Context& ctx) {
    if (ctx.ssrlab.empty()) return {false, "ssrlab path not given"};
    std::vector<std::string> csvs;
    std::vector<double> times;
    for (int run = 0; run < 2; ++run) {
        const auto out = ctx.workdir / ("determinism_" + std::to_string(run));
        fs::remove_all(out);
        const std::string cmd = ctx.ssrlab +
                                " run --env deep_sea --n 10 --algo ssr_ho --episodes 50000"
                                " --trials 10 --seed 7 --noise-scale 1.4285714285714285e-05"
                                " --threads 1 -q --out " +
                                out.string();
        const auto start = Clock::now();
        const int status = std::system(cmd.c_str());
        times.push_back(seconds_since(start));
        if (status != 0) return {false, "ssrlab exited with status " + std::to_string(status)};
        std::ifstream in(out / "regret.csv", std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        csvs.push_back(ss.str());
    }
    const bool same = !csvs[0].empty() && csvs[0] == csvs[1];
    const double slowest = std::max(times[0], times[1]);
    return {same && slowest < 120.0, std::string(same ? "byte-identical" : "DIFFERENT") +
                                         " regret.csv (" + std::to_string(csvs[0].size()) +
                                         " bytes), slowest run " + fmt(slowest) + " s"};
}

Outcome optimism_pessimism(const Context&) {
    const auto result = ssr::run_experiment(small_random_mdp(15000));
    long opt = 0, pes = 0, total = 0;
    for (const auto& d : result.diagnostics) {
        if (d.k < 5000) continue;
        ++total;
        opt += d.optimism;
        pes += d.pessimism;
    }
    const double fo = static_cast<double>(opt) / total;
    const double fp = static_cast<double>(pes) / total;
    return {fo >= 0.05 && fp >= 0.05, "episodes 5000-15000: optimism " + fmt(fo) +
                                          ", pessimism " + fmt(fp) + " (floor 0.05)"};
}

Outcome good_event(const Context&) {
    const auto result = ssr::run_experiment(small_random_mdp(10000));
    long good = 0;
    for (const auto& d : result.diagnostics) good += d.good_event;
    const double freq = static_cast<double>(good) / static_cast<double>(result.diagnostics.size());
    return {freq >= 0.99, "good-event frequency " + fmt(freq) + " over 10000 episodes (floor 0.99)"};
}

struct Comparison {
    ssr::RegretCurve ssr;
    ssr::RegretCurve other;
};

Comparison compare(const std::string& other_algo) {
    return {ssr::run_experiment(deep_sea_comparison("ssr_ho")).curve,
            ssr::run_experiment(deep_sea_comparison(other_algo)).curve};
}

Outcome ordering_detail(const Comparison& c, const std::string& prefix) {
    const int wins = paired_wins(final_regret(c.ssr), final_regret(c.other));
    const auto& mean = c.ssr.mean;
    const double at_k = mean.back();
    const double at_half = mean[mean.size() / 2 - 1];
    const bool sublinear = at_k - at_half < at_half;
    return {wins >= 8 && sublinear,
            prefix + "SSR-Ho beats RLSVI-Ho in " + std::to_string(wins) +
                "/10 paired trials (mean " + fmt(at_k, 6) + " vs " + fmt(c.other.mean.back(), 6) +
                "); regret(K) - regret(K/2) = " + fmt(at_k - at_half, 6) +
                (sublinear ? " < " : " >= ") + "regret(K/2) = " + fmt(at_half, 6)};
}

Outcome ssr_vs_rlsvi(const Context&) { return ordering_detail(compare("rlsvi_ho"), ""); }

Outcome ssr_vs_ucbvi(const Context&) {
    const auto c = compare("ucbvi_ho");
    const double ratio = c.ssr.mean.back() / c.other.mean.back();
    return {ratio >= 0.5 && ratio <= 2.0, "SSR-Ho " + fmt(c.ssr.mean.back(), 6) + " vs UCBVI-Ho " +
                                              fmt(c.other.mean.back(), 6) + ", ratio " +
                                              fmt(ratio) + " (needs [0.5, 2])"};
}

Outcome ablation(const Context&) {
    // Both planners evaluate the same sigma routine; confirm the tables agree
    // bit for bit on model snapshots from a real run before comparing regret.
    auto config = deep_sea_comparison("ssr_ho");
    const auto env = ssr::build_environment(config.env);
    const ssr::NoiseSpec noise{ssr::NoiseKind::Hoeffding, config.noise_scale, std::nullopt};
    long snapshots = 0, mismatched = 0;
    const ssr::Planner audited = [&](const ssr::EmpiricalModel& m, ssr::RngStream& rng) {
        auto plan = ssr::ssr_plan(m, env.dims(), noise, rng);
        if (m.episode() % 997 == 1) {
            ssr::RngStream other(m.episode());
            const auto twin = ssr::rlsvi_plan(m, env.dims(), noise, other);
            ++snapshots;
            mismatched += twin.sigma != plan.sigma;
        }
        return plan;
    };
    config.episodes = 20000;
    config.trials = 2;
    ssr::run_experiment(config, audited);
    auto detail = ordering_detail(compare("rlsvi_ho"), "");
    detail.pass = detail.pass && mismatched == 0 && snapshots > 0;
    detail.detail = std::to_string(snapshots) + " snapshots, " + std::to_string(mismatched) +
                    " sigma tables differ; " + detail.detail;
    return detail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string only;
    Context ctx;
    std::string workdir = (fs::temp_directory_path() / "ssr_acceptance").string();
    app.add_option("--only", only, "Run a single criterion");
    app.add_option("--ssrlab", ctx.ssrlab, "Path to the ssrlab binary");
    app.add_option("--workdir", workdir, "Scratch directory for CLI outputs");
    CLI11_PARSE(app, argc, argv);
    ctx.workdir = workdir;
    fs::create_directories(ctx.workdir);

    const std::vector<std::pair<std::string, std::function<Outcome(const Context&)>>> criteria = {
        {"dp_oracle", dp_oracle},
        {"deep_sea_value", deep_sea_value},
        {"clipping", clipping},
        {"single_seed", single_seed},
        {"determinism", determinism},
        {"optimism_pessimism", optimism_pessimism},
        {"good_event", good_event},
        {"ssr_vs_rlsvi", ssr_vs_rlsvi},
        {"ssr_vs_ucbvi", ssr_vs_ucbvi},
        {"ablation", ablation},
    };

    bool all_pass = true;
    bool matched = false;
    for (const auto& [name, check] : criteria) {
        if (!only.empty() && only != name) continue;
        matched = true;
        Outcome out;
        try {
            out = check(ctx);
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (out.pass ? "PASS " : "FAIL ") << name << ": " << out.detail << std::endl;
        all_pass = all_pass && out.pass;
    }
    if (!matched) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}

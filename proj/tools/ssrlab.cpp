// ssrlab: run seeded regret experiments from the command line.
//
//   ssrlab run --env deep_sea --n 25 --algo ssr_be --episodes 100000 \
//       --trials 10 --seed 7 --noise-scale 1.4285714e-5 --out DIR [--diagnostics]
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ssr/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct RunFlags {
    std::string config_file;
    std::optional<std::string> env;
    std::optional<int> n;
    std::optional<std::uint64_t> mask_seed;
    std::optional<double> goal_reward;
    std::optional<std::string> reward_encoding;
    std::optional<int> horizon;
    std::optional<int> states;
    std::optional<int> actions;
    std::optional<std::uint64_t> env_seed;
    std::optional<std::string> algo;
    std::optional<std::int64_t> episodes;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> noise_scale;
    std::optional<double> constant_sigma;
    bool no_rlsvi_clip = false;
    std::optional<std::string> out;
    bool diagnostics = false;
    std::optional<int> threads;
    bool quiet = false;
};

// Flags are applied as a JSON overlay so they go through the same
// validation as config files.
nlohmann::json flags_overlay(const RunFlags& f) {
    nlohmann::json j = nlohmann::json::object();
    auto put = [&j](const char* key, const auto& opt) {
        if (opt) j[key] = *opt;
    };
    put("env", f.env);
    put("n", f.n);
    put("mask_seed", f.mask_seed);
    put("goal_reward", f.goal_reward);
    put("reward_encoding", f.reward_encoding);
    put("horizon", f.horizon);
    put("states", f.states);
    put("actions", f.actions);
    put("env_seed", f.env_seed);
    put("algo", f.algo);
    put("episodes", f.episodes);
    put("trials", f.trials);
    put("seed", f.seed);
    put("noise_scale", f.noise_scale);
    put("constant_sigma", f.constant_sigma);
    put("out", f.out);
    put("threads", f.threads);
    if (f.no_rlsvi_clip) j["rlsvi_clip"] = false;
    if (f.diagnostics) j["diagnostics"] = true;
    return j;
}

int run_command(const RunFlags& flags) {
    ssr::ExperimentConfig config;
    try {
        if (!flags.config_file.empty()) {
            std::ifstream in(flags.config_file);
            if (!in) {
                std::cerr << "error: cannot read config file " << flags.config_file << '\n';
                return kExitConfig;
            }
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                std::cerr << "error: " << flags.config_file << ": " << e.what() << '\n';
                return kExitConfig;
            }
            ssr::apply_config_json(config, j);
        }
        ssr::apply_config_json(config, flags_overlay(flags));
        if (config.output_dir.empty()) throw ssr::ConfigError("--out is required");
        config.validate();
    } catch (const ssr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        const auto result = ssr::run_experiment(config);
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        if (!flags.quiet) {
            std::cout << config.algorithm << ": " << config.trials << " trial(s) x "
                      << config.episodes << " episodes, final mean cumulative regret "
                      << ssr::format_double(result.curve.mean.back()) << " (std "
                      << ssr::format_double(result.curve.stddev.back()) << "), "
                      << took.count() << " s -> " << config.output_dir << '\n';
        }
    } catch (const ssr::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ssr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabular exploration experiments with single-seed randomized value functions"};
    app.require_subcommand(1);

    RunFlags flags;
    auto* run = app.add_subcommand("run", "Run a multi-trial regret experiment");
    run->add_option("--config", flags.config_file, "JSON config; flags override its keys");
    run->add_option("--env", flags.env, "deep_sea | random");
    run->add_option("--n", flags.n, "Deep-sea grid size N (horizon N, N*N states)");
    run->add_option("--mask-seed", flags.mask_seed, "Seed for the deep-sea action mask");
    run->add_option("--goal-reward", flags.goal_reward, "Deep-sea corner payoff (+1 or -1)");
    run->add_option("--reward-encoding", flags.reward_encoding, "raw | affine");
    run->add_option("--horizon", flags.horizon, "Random MDP horizon");
    run->add_option("--states", flags.states, "Random MDP state count");
    run->add_option("--actions", flags.actions, "Random MDP action count");
    run->add_option("--env-seed", flags.env_seed, "Random MDP generator seed");
    run->add_option("--algo", flags.algo, "ssr_ho | ssr_be | rlsvi_ho | rlsvi_be | ucbvi_ho");
    run->add_option("--episodes", flags.episodes, "Episodes per trial (K)");
    run->add_option("--trials", flags.trials, "Independent trials (T)");
    run->add_option("--seed", flags.seed, "Base seed");
    run->add_option("--noise-scale", flags.noise_scale, "Multiplier on the noise magnitude");
    run->add_option("--constant-sigma", flags.constant_sigma, "Replace every sigma by this value");
    run->add_flag("--no-rlsvi-clip", flags.no_rlsvi_clip, "Disable value clipping for rlsvi");
    run->add_option("--out", flags.out, "Output directory");
    run->add_flag("--diagnostics", flags.diagnostics, "Write diagnostics.jsonl");
    run->add_option("--threads", flags.threads, "Worker threads for trials (0 = all cores)");
    run->add_flag("-q,--quiet", flags.quiet, "No summary line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    return run_command(flags);
}

#pragma once

// Seeded multi-trial experiment loop: plan -> roll out -> exact regret ->
// update, repeated K times per trial, then aggregated and written as CSV.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssr/agents.hpp"
#include "ssr/environments.hpp"
#include "ssr/estimators.hpp"
#include "ssr/mdp.hpp"
#include "ssr/rng.hpp"

namespace ssr {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EnvKind { DeepSea, Random };

struct EnvConfig {
    EnvKind kind = EnvKind::DeepSea;
    DeepSeaSpec deep_sea;
    // random MDP parameters
    int horizon = 3;
    int states = 2;
    int actions = 2;
    std::uint64_t seed = 0;
};

struct ExperimentConfig {
    EnvConfig env;
    std::string algorithm = "ssr_ho";
    std::int64_t episodes = 1000;
    int trials = 1;
    std::uint64_t base_seed = 0;
    double noise_scale = 1.0;
    std::optional<double> constant_sigma;
    bool rlsvi_clip = true;
    std::string output_dir;
    bool diagnostics = false;
    /// Worker threads for trials; 0 picks the hardware concurrency. Results
    /// do not depend on this value.
    int threads = 1;

    /// Throws ConfigError.
    void validate() const;
};

/// Keys: env, n, mask_seed, goal_reward, reward_encoding, horizon, states,
/// actions, env_seed, algo, episodes, trials, seed, noise_scale,
/// constant_sigma, rlsvi_clip, out, diagnostics, threads. Dashes and
/// underscores are interchangeable. Unknown keys raise ConfigError.
void apply_config_json(ExperimentConfig& config, const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

TabularMDP build_environment(const EnvConfig& env);

using Planner = std::function<PlanResult(const EmpiricalModel&, RngStream&)>;

Planner make_planner(const ExperimentConfig& config, const Dims& dims);

struct EpisodeOutcome {
    EpisodeRecord record;
    PlanResult plan;
};

/// Plans once and rolls out H steps. The model is not updated.
EpisodeOutcome run_episode(const TabularMDP& env, const EmpiricalModel& model,
                           const Planner& planner, RngStream& planning_rng, RngStream& env_rng);

/// V*_1(s1) - V^pi_1(s1) in original reward units.
double instantaneous_regret(const TabularMDP& mdp, const Policy& policy);
double instantaneous_regret(const TabularMDP& mdp, const OptimalSolution& optimal,
                            const Policy& policy);

struct EpisodeDiagnostics {
    int trial = 0;
    std::int64_t k = 0;
    std::optional<double> z;  // single-seed planners only
    int clip_count = 0;
    bool optimism = false;
    bool pessimism = false;
    bool good_event = false;
    bool noise_envelope = false;
    /// Some visited (h, s_h, a_h) had n_k < alpha_k.
    bool visited_below_alpha = false;
};

struct RegretCurve {
    std::int64_t episodes = 0;
    int trials = 0;
    std::vector<std::vector<double>> instantaneous;  // [trial][episode]
    std::vector<std::vector<double>> cumulative;     // [trial][episode]
    std::vector<double> mean;                        // of cumulative, per episode
    std::vector<double> stddev;                      // sample std, 0 when T = 1

    /// Fills cumulative/mean/stddev from `instantaneous`.
    void aggregate();
};

struct ExperimentResult {
    RegretCurve curve;
    std::vector<EpisodeDiagnostics> diagnostics;  // trial-major, empty unless enabled
};

/// Runs every trial with streams derived from (base_seed, trial). Writes
/// outputs when config.output_dir is non-empty. A custom planner replaces
/// the one named by config.algorithm.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::optional<Planner>& planner_override = std::nullopt);

/// regret.csv, config.json and (when diagnostics are given) diagnostics.jsonl.
void write_outputs(const RegretCurve& curve, const std::filesystem::path& dir,
                   const ExperimentConfig& config,
                   const std::vector<EpisodeDiagnostics>* diagnostics = nullptr);

/// The regret.csv body: episode, one cumulative-regret column per trial,
/// mean, std.
std::string regret_csv(const RegretCurve& curve);

/// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace ssr

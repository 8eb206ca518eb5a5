#include "ssr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <thread>

#include "ssr/diagnostics.hpp"

namespace ssr {

namespace {

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

std::string_view env_id(EnvKind kind) { return kind == EnvKind::DeepSea ? "deep_sea" : "random"; }

std::string_view encoding_id(RewardEncoding e) { return e == RewardEncoding::Raw ? "raw" : "affine"; }

template <typename T>
T get_as(const nlohmann::json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void ExperimentConfig::validate() const {
    if (episodes < 1) throw ConfigError("episodes must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (!parse_algorithm(algorithm)) throw ConfigError("unknown algorithm '" + algorithm + "'");
    if (!(noise_scale > 0.0) || !std::isfinite(noise_scale)) {
        throw ConfigError("noise scale must be positive");
    }
    if (constant_sigma && !(*constant_sigma >= 0.0)) {
        throw ConfigError("constant sigma must be nonnegative");
    }
    if (env.kind == EnvKind::DeepSea) {
        if (env.deep_sea.size < 2) throw ConfigError("deep sea needs n >= 2");
    } else if (env.horizon < 1 || env.states < 1 || env.actions < 1) {
        throw ConfigError("random MDP dimensions must be >= 1");
    }
}

void apply_config_json(ExperimentConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [raw_key, v] : j.items()) {
        const auto key = normalize_key(raw_key);
        if (key == "env") {
            const auto id = get_as<std::string>(v, key);
            if (id == "deep_sea") {
                c.env.kind = EnvKind::DeepSea;
            } else if (id == "random") {
                c.env.kind = EnvKind::Random;
            } else {
                throw ConfigError("unknown environment '" + id + "'");
            }
        } else if (key == "n") {
            c.env.deep_sea.size = get_as<int>(v, key);
        } else if (key == "mask_seed") {
            c.env.deep_sea.mask_seed = get_as<std::uint64_t>(v, key);
        } else if (key == "goal_reward") {
            c.env.deep_sea.goal_reward = get_as<double>(v, key);
        } else if (key == "reward_encoding") {
            const auto id = get_as<std::string>(v, key);
            if (id == "raw") {
                c.env.deep_sea.encoding = RewardEncoding::Raw;
            } else if (id == "affine") {
                c.env.deep_sea.encoding = RewardEncoding::Affine;
            } else {
                throw ConfigError("unknown reward encoding '" + id + "'");
            }
        } else if (key == "horizon") {
            c.env.horizon = get_as<int>(v, key);
        } else if (key == "states") {
            c.env.states = get_as<int>(v, key);
        } else if (key == "actions") {
            c.env.actions = get_as<int>(v, key);
        } else if (key == "env_seed") {
            c.env.seed = get_as<std::uint64_t>(v, key);
        } else if (key == "algo") {
            c.algorithm = get_as<std::string>(v, key);
        } else if (key == "episodes") {
            c.episodes = get_as<std::int64_t>(v, key);
        } else if (key == "trials") {
            c.trials = get_as<int>(v, key);
        } else if (key == "seed") {
            c.base_seed = get_as<std::uint64_t>(v, key);
        } else if (key == "noise_scale") {
            c.noise_scale = get_as<double>(v, key);
        } else if (key == "constant_sigma") {
            if (v.is_null()) {
                c.constant_sigma.reset();
            } else {
                c.constant_sigma = get_as<double>(v, key);
            }
        } else if (key == "rlsvi_clip") {
            c.rlsvi_clip = get_as<bool>(v, key);
        } else if (key == "out") {
            c.output_dir = get_as<std::string>(v, key);
        } else if (key == "diagnostics") {
            c.diagnostics = get_as<bool>(v, key);
        } else if (key == "threads") {
            c.threads = get_as<int>(v, key);
        } else {
            throw ConfigError("unknown config key '" + raw_key + "'");
        }
    }
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["env"] = env_id(c.env.kind);
    if (c.env.kind == EnvKind::DeepSea) {
        j["n"] = c.env.deep_sea.size;
        j["mask_seed"] = c.env.deep_sea.mask_seed;
        j["goal_reward"] = c.env.deep_sea.goal_reward;
        j["reward_encoding"] = encoding_id(c.env.deep_sea.encoding);
    } else {
        j["horizon"] = c.env.horizon;
        j["states"] = c.env.states;
        j["actions"] = c.env.actions;
        j["env_seed"] = c.env.seed;
    }
    j["algo"] = c.algorithm;
    j["episodes"] = c.episodes;
    j["trials"] = c.trials;
    j["seed"] = c.base_seed;
    j["noise_scale"] = c.noise_scale;
    if (c.constant_sigma) {
        j["constant_sigma"] = *c.constant_sigma;
    } else {
        j["constant_sigma"] = nullptr;
    }
    j["rlsvi_clip"] = c.rlsvi_clip;
    j["out"] = c.output_dir;
    j["diagnostics"] = c.diagnostics;
    return j;
}

TabularMDP build_environment(const EnvConfig& env) {
    if (env.kind == EnvKind::DeepSea) return deep_sea(env.deep_sea);
    return random_mdp(env.horizon, env.states, env.actions, env.seed);
}

Planner make_planner(const ExperimentConfig& config, const Dims& dims) {
    const auto algo = parse_algorithm(config.algorithm);
    if (!algo) throw ConfigError("unknown algorithm '" + config.algorithm + "'");
    PlannerOptions options;
    options.noise.kind = noise_kind_of(*algo);
    options.noise.scale = config.noise_scale;
    options.noise.constant_sigma = config.constant_sigma;
    options.rlsvi_clip = config.rlsvi_clip;
    return [algo = *algo, options, dims](const EmpiricalModel& model, RngStream& rng) {
        return plan(algo, options, model, dims, rng);
    };
}

EpisodeOutcome run_episode(const TabularMDP& env, const EmpiricalModel& model,
                           const Planner& planner, RngStream& planning_rng, RngStream& env_rng) {
    EpisodeOutcome out{EpisodeRecord{}, planner(model, planning_rng)};
    const Dims& d = env.dims();
    out.record.k = model.episode();
    out.record.steps.reserve(static_cast<std::size_t>(d.horizon));
    int s = env.initial_state();
    for (int h = 0; h < d.horizon; ++h) {
        const int a = act(out.plan, h, s);
        const auto outcome = step(env, h, s, a, env_rng);
        out.record.steps.push_back(Step{s, a, outcome.reward});
        s = outcome.next_state;
    }
    out.record.final_state = s;
    return out;
}

double instantaneous_regret(const TabularMDP& mdp, const OptimalSolution& optimal,
                            const Policy& policy) {
    const auto values = policy_values(mdp, policy);
    const int s1 = mdp.initial_state();
    return mdp.codec().decode_gap(optimal.values.value(0, s1) - values.value(0, s1));
}

double instantaneous_regret(const TabularMDP& mdp, const Policy& policy) {
    return instantaneous_regret(mdp, optimal_values(mdp), policy);
}

void RegretCurve::aggregate() {
    trials = static_cast<int>(instantaneous.size());
    episodes = trials > 0 ? static_cast<std::int64_t>(instantaneous.front().size()) : 0;
    cumulative.assign(instantaneous.size(), {});
    for (std::size_t t = 0; t < instantaneous.size(); ++t) {
        auto& cum = cumulative[t];
        cum.resize(instantaneous[t].size());
        double total = 0.0;
        for (std::size_t k = 0; k < cum.size(); ++k) {
            total += instantaneous[t][k];
            cum[k] = total;
        }
    }
    mean.assign(static_cast<std::size_t>(episodes), 0.0);
    stddev.assign(static_cast<std::size_t>(episodes), 0.0);
    for (std::int64_t k = 0; k < episodes; ++k) {
        double sum = 0.0;
        for (const auto& cum : cumulative) sum += cum[k];
        const double m = sum / trials;
        mean[k] = m;
        if (trials > 1) {
            double ss = 0.0;
            for (const auto& cum : cumulative) ss += (cum[k] - m) * (cum[k] - m);
            stddev[k] = std::sqrt(ss / (trials - 1));
        }
    }
}

namespace {

struct TrialOutput {
    std::vector<double> regret;
    std::vector<EpisodeDiagnostics> diagnostics;
};

TrialOutput run_trial(const ExperimentConfig& config, const TabularMDP& env,
                      const OptimalSolution& optimal, const Planner& planner, int trial) {
    const Dims& d = env.dims();
    auto planning_rng = RngStream::derive(config.base_seed, trial, StreamPurpose::PlanningNoise);
    auto env_rng = RngStream::derive(config.base_seed, trial, StreamPurpose::Environment);
    EmpiricalModel model(d);
    const NoiseKind kind = [&] {
        const auto algo = parse_algorithm(config.algorithm);
        return algo ? noise_kind_of(*algo) : NoiseKind::Hoeffding;
    }();

    TrialOutput out;
    out.regret.reserve(static_cast<std::size_t>(config.episodes));
    if (config.diagnostics) out.diagnostics.reserve(static_cast<std::size_t>(config.episodes));
    for (std::int64_t e = 0; e < config.episodes; ++e) {
        auto episode = run_episode(env, model, planner, planning_rng, env_rng);
        out.regret.push_back(instantaneous_regret(env, optimal, episode.plan.policy));
        if (config.diagnostics) {
            EpisodeDiagnostics diag;
            diag.trial = trial;
            diag.k = model.episode();
            if (episode.plan.z.size() == 1) diag.z = episode.plan.z.front();
            diag.clip_count = static_cast<int>(episode.plan.clip_events.size());
            diag.optimism = optimism_flag(episode.plan.v_bar, optimal.values.v);
            diag.pessimism = pessimism_flag(episode.plan.v_bar, optimal.values.v);
            diag.good_event = good_event(model, env, optimal.values, kind);
            diag.noise_envelope = noise_envelope(episode.plan, model.episode());
            const double alpha = alpha_k(d.horizon, d.states, d.actions, model.episode());
            for (const auto& st : episode.record.steps) {
                const int h = static_cast<int>(&st - episode.record.steps.data());
                if (static_cast<double>(model.visits(h, st.state, st.action)) < alpha) {
                    diag.visited_below_alpha = true;
                    break;
                }
            }
            out.diagnostics.push_back(diag);
        }
        model.update(episode.record);
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::optional<Planner>& planner_override) {
    config.validate();
    const auto env = build_environment(config.env);
    const auto optimal = optimal_values(env);
    const Planner planner = planner_override ? *planner_override : make_planner(config, env.dims());

    std::vector<TrialOutput> trials(static_cast<std::size_t>(config.trials));
    int workers = config.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency())
                                      : config.threads;
    workers = std::clamp(workers, 1, config.trials);
    if (workers == 1) {
        for (int t = 0; t < config.trials; ++t) trials[t] = run_trial(config, env, optimal, planner, t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        {
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (int t = next++; t < config.trials; t = next++) {
                            trials[t] = run_trial(config, env, optimal, planner, t);
                        }
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    ExperimentResult result;
    for (auto& t : trials) {
        result.curve.instantaneous.push_back(std::move(t.regret));
        if (config.diagnostics) {
            result.diagnostics.insert(result.diagnostics.end(), t.diagnostics.begin(),
                                      t.diagnostics.end());
        }
    }
    result.curve.aggregate();

    if (!config.output_dir.empty()) {
        write_outputs(result.curve, config.output_dir, config,
                      config.diagnostics ? &result.diagnostics : nullptr);
    }
    return result;
}

std::string format_double(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string regret_csv(const RegretCurve& curve) {
    std::string out = "episode";
    for (int t = 0; t < curve.trials; ++t) out += ",trial_" + std::to_string(t);
    out += ",mean,std\n";
    for (std::int64_t k = 0; k < curve.episodes; ++k) {
        out += std::to_string(k + 1);
        for (const auto& cum : curve.cumulative) {
            out += ',';
            out += format_double(cum[k]);
        }
        out += ',';
        out += format_double(curve.mean[k]);
        out += ',';
        out += format_double(curve.stddev[k]);
        out += '\n';
    }
    return out;
}

void write_outputs(const RegretCurve& curve, const std::filesystem::path& dir,
                   const ExperimentConfig& config,
                   const std::vector<EpisodeDiagnostics>* diagnostics) {
    if (curve.episodes < 1 || curve.trials < 1) throw std::invalid_argument("empty regret curve");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }

    const auto csv_path = dir / "regret.csv";
    auto csv = open_output(csv_path);
    csv << regret_csv(curve);
    finish_output(csv, csv_path);

    const auto cfg_path = dir / "config.json";
    auto cfg = open_output(cfg_path);
    cfg << config_to_json(config).dump(2) << '\n';
    finish_output(cfg, cfg_path);

    if (diagnostics) {
        const auto diag_path = dir / "diagnostics.jsonl";
        auto out = open_output(diag_path);
        for (const auto& d : *diagnostics) {
            nlohmann::ordered_json j;
            j["trial"] = d.trial;
            j["k"] = d.k;
            if (d.z) {
                j["z"] = *d.z;
            } else {
                j["z"] = nullptr;
            }
            j["clip_count"] = d.clip_count;
            j["optimism"] = d.optimism;
            j["pessimism"] = d.pessimism;
            j["good_event"] = d.good_event;
            j["noise_envelope"] = d.noise_envelope;
            j["visited_below_alpha"] = d.visited_below_alpha;
            out << j.dump() << '\n';
        }
        finish_output(out, diag_path);
    }
}

}  // namespace ssr

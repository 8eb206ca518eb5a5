#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "ssr/agents.hpp"
#include "ssr/diagnostics.hpp"
#include "ssr/environments.hpp"
#include "ssr/estimators.hpp"
#include "ssr/harness.hpp"
#include "ssr/mdp.hpp"

namespace py = pybind11;

namespace {

// Python dicts go through the same parser as the CLI's --config files.
ssr::ExperimentConfig config_from_dict(const py::dict& d) {
    const auto json = py::module_::import("json");
    const auto text = json.attr("dumps")(d).cast<std::string>();
    ssr::ExperimentConfig config;
    ssr::apply_config_json(config, nlohmann::json::parse(text));
    return config;
}

py::dict plan_to_dict(const ssr::PlanResult& p) {
    py::dict out;
    out["q"] = p.q_bar;
    out["v"] = p.v_bar;
    out["sigma"] = p.sigma;
    out["noise"] = p.noise;
    out["policy"] = p.policy.actions;
    out["z"] = p.z;
    out["clip_events"] = p.clip_events;
    return out;
}

std::vector<ssr::Step> steps_from(const std::vector<std::tuple<int, int, double>>& raw) {
    std::vector<ssr::Step> steps;
    for (const auto& [s, a, r] : raw) steps.push_back({s, a, r});
    return steps;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tabular exploration with single-seed randomized value functions";

    py::register_exception<ssr::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ssr::IoError>(m, "IoError", PyExc_OSError);

    py::class_<ssr::Dims>(m, "Dims")
        .def(py::init<int, int, int>(), py::arg("horizon"), py::arg("states"), py::arg("actions"))
        .def_readonly("horizon", &ssr::Dims::horizon)
        .def_readonly("states", &ssr::Dims::states)
        .def_readonly("actions", &ssr::Dims::actions)
        .def("__repr__", [](const ssr::Dims& d) {
            return "Dims(horizon=" + std::to_string(d.horizon) + ", states=" +
                   std::to_string(d.states) + ", actions=" + std::to_string(d.actions) + ")";
        });

    py::class_<ssr::TabularMDP>(m, "TabularMDP")
        .def_property_readonly("dims", &ssr::TabularMDP::dims)
        .def_property_readonly("initial_state", &ssr::TabularMDP::initial_state)
        .def("reward", &ssr::TabularMDP::reward, py::arg("h"), py::arg("s"), py::arg("a"))
        .def("transition_row", &ssr::TabularMDP::transition_row, py::arg("h"), py::arg("s"),
             py::arg("a"))
        .def("decode_return", [](const ssr::TabularMDP& mdp, double stored) {
            return mdp.codec().decode_return(stored, mdp.horizon());
        });

    m.def(
        "deep_sea",
        [](int n, std::uint64_t mask_seed, double goal_reward, const std::string& encoding) {
            ssr::DeepSeaSpec spec{n, mask_seed, goal_reward, ssr::RewardEncoding::Raw};
            if (encoding == "affine") {
                spec.encoding = ssr::RewardEncoding::Affine;
            } else if (encoding != "raw") {
                throw py::value_error("encoding must be 'raw' or 'affine'");
            }
            return ssr::deep_sea(spec);
        },
        py::arg("n"), py::arg("mask_seed") = 0, py::arg("goal_reward") = 1.0,
        py::arg("encoding") = "raw");
    m.def("deep_sea_mask", [](int n, std::uint64_t mask_seed) {
        return ssr::deep_sea_mask({.size = n, .mask_seed = mask_seed});
    }, py::arg("n"), py::arg("mask_seed") = 0);
    m.def("random_mdp", &ssr::random_mdp, py::arg("horizon"), py::arg("states"),
          py::arg("actions"), py::arg("seed"));

    m.def(
        "optimal_values",
        [](const ssr::TabularMDP& mdp) {
            const auto sol = ssr::optimal_values(mdp);
            return py::make_tuple(sol.values.v, sol.values.q, sol.policy.actions);
        },
        py::arg("mdp"), "Returns (V, Q, policy) as flat row-major lists.");
    m.def(
        "policy_value",
        [](const ssr::TabularMDP& mdp, const std::vector<int>& actions) {
            ssr::Policy pi(mdp.horizon(), mdp.states());
            if (actions.size() != pi.actions.size()) throw py::value_error("policy has wrong size");
            pi.actions = actions;
            return ssr::policy_values(mdp, pi).value(0, mdp.initial_state());
        },
        py::arg("mdp"), py::arg("policy"));
    m.def("variance", [](const std::vector<double>& d, const std::vector<double>& v) {
        return ssr::variance(d, v);
    }, py::arg("dist"), py::arg("values"));
    m.def("clip", &ssr::clip, py::arg("threshold"), py::arg("x"));

    py::class_<ssr::EmpiricalModel>(m, "EmpiricalModel")
        .def(py::init<ssr::Dims>(), py::arg("dims"))
        .def_property_readonly("episode", &ssr::EmpiricalModel::episode)
        .def(
            "update",
            [](ssr::EmpiricalModel& model, const std::vector<std::tuple<int, int, double>>& steps,
               int final_state) {
                model.update({model.episode(), steps_from(steps), final_state});
            },
            py::arg("steps"), py::arg("final_state"),
            "steps: list of (state, action, reward) with one entry per step.")
        .def("visits", &ssr::EmpiricalModel::visits)
        .def("r_hat", &ssr::EmpiricalModel::r_hat)
        .def("p_hat", &ssr::EmpiricalModel::p_hat)
        .def("p_tilde", &ssr::EmpiricalModel::p_tilde)
        .def("counts_json", &ssr::EmpiricalModel::counts_json);

    m.def("sigma_ho", &ssr::sigma_ho, py::arg("dims"), py::arg("k"), py::arg("n"));
    m.def("sigma_be", [](const ssr::Dims& d, std::int64_t k, std::int64_t n,
                         const std::vector<double>& p, const std::vector<double>& v) {
        return ssr::sigma_be(d, k, n, p, v);
    }, py::arg("dims"), py::arg("k"), py::arg("n"), py::arg("p_tilde"), py::arg("v_next"));
    m.def(
        "ssr_plan",
        [](const ssr::EmpiricalModel& model, double z, const std::string& noise, double scale) {
            if (noise != "ho" && noise != "be") throw py::value_error("noise must be 'ho' or 'be'");
            const ssr::NoiseSpec spec{
                noise == "ho" ? ssr::NoiseKind::Hoeffding : ssr::NoiseKind::Bernstein, scale,
                std::nullopt};
            return plan_to_dict(ssr::ssr_plan_with_seed(model, model.dims(), spec, z));
        },
        py::arg("model"), py::arg("z"), py::arg("noise") = "ho", py::arg("scale") = 1.0);
    m.def(
        "ucbvi_plan",
        [](const ssr::EmpiricalModel& model, double scale) {
            return plan_to_dict(
                ssr::ucbvi_plan(model, model.dims(), {ssr::NoiseKind::Hoeffding, scale, std::nullopt}));
        },
        py::arg("model"), py::arg("scale") = 1.0);

    m.def("alpha_k", &ssr::alpha_k, py::arg("horizon"), py::arg("states"), py::arg("actions"),
          py::arg("k"));
    m.def("gamma_k", &ssr::gamma_k, py::arg("sigma"), py::arg("k"));

    m.def(
        "run_experiment",
        [](const py::dict& config) {
            const auto cfg = config_from_dict(config);
            ssr::ExperimentResult result;
            {
                py::gil_scoped_release release;
                result = ssr::run_experiment(cfg);
            }
            py::dict out;
            out["cumulative"] = result.curve.cumulative;
            out["mean"] = result.curve.mean;
            out["std"] = result.curve.stddev;
            out["csv"] = ssr::regret_csv(result.curve);
            return out;
        },
        py::arg("config"),
        "Runs an experiment from a dict with the CLI's config keys. Writes files when 'out' is set.");
}

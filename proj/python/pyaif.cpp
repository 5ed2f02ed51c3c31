#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aif/config.hpp"
#include "aif/envs.hpp"
#include "aif/errors.hpp"
#include "aif/harness.hpp"
#include "aif/inference.hpp"
#include "aif/model_io.hpp"
#include "aif/planning.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

std::vector<double> to_list(const aif::Categorical& c) { return {c.begin(), c.end()}; }

std::vector<std::vector<double>> to_lists(const aif::MarginalBeliefs& b) {
  std::vector<std::vector<double>> out;
  for (const auto& q : b.per_time) out.push_back(to_list(q));
  return out;
}

aif::History make_history(std::vector<aif::Index> observations, std::vector<aif::Index> actions) {
  return aif::History{std::move(observations), std::move(actions)};
}

py::dict breakdown_dict(const aif::EfeBreakdown& b) {
  return py::dict("total"_a = b.total, "risk"_a = b.risk, "ambiguity"_a = b.ambiguity, "extrinsic"_a = b.extrinsic,
                  "intrinsic"_a = b.intrinsic, "residual"_a = b.residual);
}

std::string as_json_text(const py::object& doc) {
  if (py::isinstance<py::str>(doc)) return doc.cast<std::string>();
  return py::module_::import("json").attr("dumps")(doc).cast<std::string>();
}

}  // namespace

PYBIND11_MODULE(pyaif, m) {
  m.doc() = "Discrete active inference: exact inference, expected free energy planning and the T-Maze";

  py::register_exception<aif::Error>(m, "AifError", PyExc_RuntimeError);

  py::class_<aif::tmaze::Params>(m, "TMazeParams")
      .def(py::init<>())
      .def_readwrite("preference_magnitude", &aif::tmaze::Params::preference_magnitude)
      .def_readwrite("stray_cue_prob", &aif::tmaze::Params::stray_cue_prob)
      .def_readwrite("reward_direct", &aif::tmaze::Params::reward_direct)
      .def_readwrite("reward_after_cue", &aif::tmaze::Params::reward_after_cue)
      .def_readwrite("punishment", &aif::tmaze::Params::punishment);

  py::class_<aif::GenerativeModel>(m, "GenerativeModel")
      .def_readonly("n_states", &aif::GenerativeModel::n_states)
      .def_readonly("n_obs", &aif::GenerativeModel::n_obs)
      .def_readonly("n_actions", &aif::GenerativeModel::n_actions)
      .def_readonly("horizon", &aif::GenerativeModel::horizon)
      .def_readonly("initial_belief", &aif::GenerativeModel::initial_belief)
      .def_property_readonly("obs_log_pref", [](const aif::GenerativeModel& g) { return g.preferences.obs_log_pref; })
      .def_property_readonly("likelihood",
                             [](const aif::GenerativeModel& g) {
                               std::vector<std::vector<double>> rows;
                               for (std::size_t o = 0; o < g.n_obs; ++o) {
                                 rows.emplace_back(g.likelihood.row(o).begin(), g.likelihood.row(o).end());
                               }
                               return rows;
                             })
      .def_property_readonly("state_labels", [](const aif::GenerativeModel& g) { return g.labels.states; })
      .def_property_readonly("observation_labels", [](const aif::GenerativeModel& g) { return g.labels.observations; })
      .def_property_readonly("action_labels", [](const aif::GenerativeModel& g) { return g.labels.actions; })
      .def_static(
          "from_json",
          [](const py::object& doc) {
            auto model = aif::model_from_json(nlohmann::json::parse(as_json_text(doc)));
            aif::require_valid(model);
            aif::pullback_preferences(model);
            return model;
          },
          "doc"_a, "Builds and validates a model from a JSON string or dict")
      .def_static(
          "load", [](const std::string& path) { return aif::load_model(path); }, "path"_a)
      .def("to_json", [](const aif::GenerativeModel& g) { return aif::model_to_json(g).dump(); });

  m.def("tmaze_model", &aif::tmaze::tmaze_model, "params"_a = aif::tmaze::Params{});

  m.def(
      "validate",
      [](const py::object& doc) {
        const auto report = aif::validate_model(aif::model_from_json(nlohmann::json::parse(as_json_text(doc))));
        return py::make_tuple(report.ok(), report.to_string());
      },
      "doc"_a, "Returns (ok, report) for a model document");

  m.def(
      "pullback", [](const aif::GenerativeModel& g) { return to_list(aif::state_preferences(g)); }, "model"_a);

  m.def(
      "filter_and_smooth",
      [](const aif::GenerativeModel& g, std::vector<aif::Index> obs, std::vector<aif::Index> actions,
         std::vector<aif::Index> policy) {
        return to_lists(aif::filter_and_smooth(g, make_history(std::move(obs), std::move(actions)),
                                               aif::Policy{std::move(policy)}));
      },
      "model"_a, "observations"_a, "actions"_a = std::vector<aif::Index>{}, "policy"_a = std::vector<aif::Index>{});

  m.def(
      "enumerate_marginals",
      [](const aif::GenerativeModel& g, std::vector<aif::Index> obs, std::vector<aif::Index> actions,
         std::vector<aif::Index> policy) {
        return to_lists(aif::enumerate_posterior(g, make_history(std::move(obs), std::move(actions)),
                                                 aif::Policy{std::move(policy)})
                            .marginals());
      },
      "model"_a, "observations"_a, "actions"_a = std::vector<aif::Index>{}, "policy"_a = std::vector<aif::Index>{});

  m.def(
      "efe_breakdown",
      [](const aif::GenerativeModel& g, std::vector<aif::Index> obs, std::vector<aif::Index> actions,
         std::vector<aif::Index> policy) {
        return breakdown_dict(aif::efe_breakdown(g, make_history(std::move(obs), std::move(actions)),
                                                 aif::Policy{std::move(policy)}));
      },
      "model"_a, "observations"_a, "actions"_a, "policy"_a);

  m.def(
      "policy_posterior",
      [](const aif::GenerativeModel& g, std::vector<aif::Index> obs, std::vector<aif::Index> actions, double gamma) {
        const auto post = aif::policy_posterior(g, make_history(std::move(obs), std::move(actions)), gamma);
        py::list policies, breakdowns;
        for (std::size_t i = 0; i < post.policies.size(); ++i) {
          policies.append(py::cast(post.policies[i].actions));
          breakdowns.append(breakdown_dict(post.breakdowns[i]));
        }
        return py::dict("policies"_a = policies, "probs"_a = to_list(post.probs), "breakdowns"_a = breakdowns,
                        "action_marginal"_a = to_list(aif::action_marginal(post)));
      },
      "model"_a, "observations"_a, "actions"_a = std::vector<aif::Index>{}, "gamma"_a = 1.0);

  m.def(
      "run_experiment",
      [](const py::object& config_doc, py::object output_dir) {
        auto config = aif::config_from_json(nlohmann::json::parse(as_json_text(config_doc)));
        aif::ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = aif::run_experiment(config);
        }
        if (!output_dir.is_none()) {
          aif::write_outputs(result, config, aif::make_model(config.environment),
                             py::str(output_dir).cast<std::string>());
        }
        py::list summary;
        for (const auto& s : result.summary) {
          summary.append(py::dict("agent"_a = s.agent, "kind"_a = std::string(aif::to_string(s.kind)),
                                  "scores"_a = s.scores, "cumulative"_a = s.cumulative, "mean"_a = s.mean,
                                  "std_error"_a = s.std_error));
        }
        py::list trials;
        for (const auto& t : result.trials) {
          const auto& r = t.record;
          trials.append(py::dict("trial"_a = r.trial_index, "agent"_a = r.agent, "context"_a = r.context,
                                 "actions"_a = r.actions, "observations"_a = r.observations, "score"_a = r.score));
        }
        return py::dict("summary"_a = summary, "trials"_a = trials);
      },
      "config"_a, "output_dir"_a = py::none(),
      "Runs an experiment from a config JSON string or dict; optionally writes the output files");
}

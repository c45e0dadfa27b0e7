#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iobt/connectivity.hpp"
#include "iobt/harness.hpp"
#include "iobt/lp.hpp"

namespace py = pybind11;

namespace {

using namespace iobt;

LinearProgram make_lp(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                      const std::vector<double>& b, const std::vector<bool>& equality) {
  if (A.size() != b.size()) throw py::value_error("A and b differ in length");
  for (const auto& row : A) {
    if (row.size() != c.size()) throw py::value_error("row length differs from len(c)");
  }
  if (!equality.empty() && equality.size() != b.size()) {
    throw py::value_error("equality flags differ in length from b");
  }
  LinearProgram lp;
  lp.c = c;
  lp.A = A;
  lp.b = b;
  lp.is_equality = equality;
  return lp;
}

py::dict policy_dict(const StagePolicy& p) {
  py::list q;
  for (const auto& [a, prob] : p.q_star.support) q.append(py::make_tuple(a.str(), prob));
  py::dict d;
  d["q_star"] = q;
  d["b_star"] = p.b_star.str();
  d["omega_a"] = p.omega_a;
  d["omega_d"] = p.omega_d;
  return d;
}

Mode mode_of(const std::string& s) {
  if (s == "fse") return Mode::kFSE;
  if (s == "nfse") return Mode::kNFSE;
  if (s == "equal") return Mode::kEqual;
  throw py::value_error("mode must be fse, nfse or equal");
}

ExperimentConfig config_of(const std::string& path) {
  return path.empty() ? default_config() : load_config(path);
}

}  // namespace

PYBIND11_MODULE(iobt, m) {
  m.doc() = "Dynamic IoBT connectivity game solver";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InfeasibleInstance>(m, "InfeasibleInstance", PyExc_RuntimeError);

  m.def(
      "solve_lp",
      [](const std::vector<double>& c, const std::vector<std::vector<double>>& A,
         const std::vector<double>& b, const std::vector<bool>& equality) {
        LPSolution s = solve_lp(make_lp(c, A, b, equality));
        py::dict d;
        d["status"] = to_string(s.status);
        d["value"] = s.value;
        d["x"] = s.x;
        return d;
      },
      py::arg("c"), py::arg("A"), py::arg("b"), py::arg("equality") = std::vector<bool>{},
      "maximize c.x s.t. A x <= b (== where flagged), x >= 0");

  m.def(
      "zero_variable_test",
      [](const std::vector<double>& c, const std::vector<std::vector<double>>& A,
         const std::vector<double>& b, int r, const std::vector<bool>& equality) {
        return zero_variable_test(make_lp(c, A, b, equality), r);
      },
      py::arg("c"), py::arg("A"), py::arg("b"), py::arg("r"),
      py::arg("equality") = std::vector<bool>{});

  m.def(
      "solve_stage_game",
      [](const std::vector<std::vector<double>>& fa, const std::vector<std::vector<double>>& fd,
         const std::vector<std::vector<bool>>& coupling) {
        if (fa.empty() || fa.size() != fd.size()) throw py::value_error("table shapes differ");
        StageGame g;
        g.resize(static_cast<int>(fa.size()), static_cast<int>(fa[0].size()));
        for (int i = 0; i < g.na(); ++i) {
          if (static_cast<int>(fa[i].size()) != g.nd() ||
              static_cast<int>(fd[i].size()) != g.nd()) {
            throw py::value_error("ragged payoff table");
          }
          for (int k = 0; k < g.nd(); ++k) {
            g.fa[i * g.nd() + k] = fa[i][k];
            g.fd[i * g.nd() + k] = fd[i][k];
            if (!coupling.empty()) g.coupling[i * g.nd() + k] = coupling.at(i).at(k) ? 1 : 0;
          }
        }
        StageSolution s = solve_stage_game(g);
        py::dict d;
        d["b"] = s.b < 0 ? py::object(py::none()) : py::object(py::int_(s.b));
        d["q"] = s.q;
        d["value_a"] = s.value_a;
        d["value_d"] = s.value_d;
        return d;
      },
      py::arg("fa"), py::arg("fd"), py::arg("coupling") = std::vector<std::vector<bool>>{},
      "Leader (attacker) commitment solution; rows are attacker actions.");

  m.def(
      "solve",
      [](const std::string& mode, int horizon, std::uint64_t seed, double scale,
         const std::string& config) {
        ExperimentConfig ec = config_of(config);
        GameConfig cfg = scaled_game(ec, scale);
        cfg.horizon = horizon;
        Mode md = mode_of(mode);
        py::gil_scoped_release release;
        NetworkState psi = generate_instance(cfg, scaled_instance(ec, scale), seed);
        ValueCache cache;
        StagePolicy p;
        int t = 1;
        if (md == Mode::kFSE) {
          p = solve_stage(psi, 1, cfg, &cache);
        } else if (md == Mode::kNFSE) {
          p = solve_nfse(psi, cfg);
          t = cfg.horizon;
        } else {
          p.q_star = equal_probability_policy(psi);
        }
        std::string verdict;
        if (md != Mode::kEqual) {
          StageGame g = build_stage_game(psi, t, cfg, &cache, {});
          verdict = to_string(check_prop1(psi, t, p, g, cfg).verdict);
        }
        py::gil_scoped_acquire acquire;
        py::dict d = policy_dict(p);
        d["devices"] = psi.devices.size();
        d["verdict"] = verdict.empty() ? py::object(py::none()) : py::object(py::str(verdict));
        return d;
      },
      py::arg("mode") = "fse", py::arg("horizon") = 1, py::arg("seed") = 1,
      py::arg("scale") = 0.1, py::arg("config") = "",
      "Generate one instance and return the stage-1 policy.");

  m.def(
      "run_scenario",
      [](int scenario, double scale, int runs, std::uint64_t seed,
         const std::vector<std::string>& modes, bool exact, const std::string& config) {
        ExperimentConfig ec = config_of(config);
        ScenarioOptions so;
        so.scale = scale;
        so.runs = runs;
        so.seed = seed;
        so.continuation = exact ? Continuation::kExact : Continuation::kSeparable;
        for (const auto& s : modes) so.modes.push_back(mode_of(s));
        if (scenario < 1 || scenario > 3) throw py::value_error("scenario must be 1, 2 or 3");
        std::vector<MetricsRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_scenario(ec, scenario, so);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["scenario"] = r.scenario;
          d["mode"] = r.mode;
          d["value"] = r.value;
          d["T"] = r.T;
          d["p_H"] = r.p_h;
          d["p_c_max"] = r.p_c_max;
          d["N_D"] = r.n_d;
          out.append(d);
        }
        return out;
      },
      py::arg("scenario"), py::arg("scale") = 0.1, py::arg("runs") = 10, py::arg("seed") = 1,
      py::arg("modes") = std::vector<std::string>{}, py::arg("exact") = false,
      py::arg("config") = "");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "iobt");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return run_cli(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"));
}

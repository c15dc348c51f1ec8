#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "harnack/catalog.hpp"
#include "harnack/commands.hpp"
#include "harnack/ode_lab.hpp"
#include "harnack/paths.hpp"
#include "harnack/pde_lab.hpp"
#include "harnack/system_check.hpp"

namespace py = pybind11;
using namespace harnack;

namespace {

Equation eq_from(const std::string& json_text) {
  return parse_equation(nlohmann::json::parse(json_text));
}

CatalogEntry entry_from(const std::string& id, const std::string& params_json) {
  return resolve_catalog(id, parse_catalog_params(nlohmann::json::parse(params_json)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Harnack inequality checks (C++ core)";

  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);

  // equations: the equation is given as JSON, e.g. '{"kind": "log", "a": 2}'
  m.def("big_H", [](const std::string& eq, double u) { return eq_from(eq).big_H(u); });
  m.def("h", [](const std::string& eq, double f) {
    ReactionTerm r = eq_from(eq).reaction(f);
    return py::make_tuple(r.h, r.h1, r.h2);
  }, "h, h', h'' at f");

  m.def("catalog_ids", &catalog_ids);

  m.def("candidate_values",
        [](const std::string& id, const std::string& params, double t) {
          CatalogEntry e = entry_from(id, params);
          QuintupleSample q = evaluate(e.cand, t);
          py::dict d;
          auto put = [&](const char* k, const Sample& s) {
            d[k] = py::make_tuple(static_cast<double>(s.value), static_cast<double>(s.deriv));
          };
          put("gamma", q.gamma);
          put("alpha", q.alpha);
          put("phi", q.phi);
          put("c", q.c);
          if (q.has_beta) put("beta", q.beta);
          return d;
        },
        py::arg("id"), py::arg("params") = "{}", py::arg("t"));

  m.def("margins",
        [](const std::string& id, const std::string& params, double t, double f) {
          CatalogEntry e = entry_from(id, params);
          MarginValues v = margins_from_values(evaluate(e.cand, t), e.eq.reaction(f), e.params.m,
                                               e.params.K);
          py::dict d;
          d["a1_first"] = static_cast<double>(v.a1_first);
          d["a1_first_lemma"] = static_cast<double>(v.a1_first_lemma);
          d["a1_second"] = static_cast<double>(v.a1_second);
          d["a1_third"] = static_cast<double>(v.a1_third);
          d["a3_third"] = static_cast<double>(v.a3_third);
          return d;
        },
        py::arg("id"), py::arg("params") = "{}", py::arg("t"), py::arg("f"));

  // Runs a verify-system/simulate/sharpness/eps-sweep config; returns
  // (exit_code, report as JSON text). Nothing is written to disk.
  m.def("run", [](const std::string& config_json) {
    RunContext ctx;
    ctx.out_dir.clear();
    ctx.quiet = true;
    nlohmann::json cfg = nlohmann::json::parse(config_json);
    std::string cmd = cfg.value("command", "");
    CommandResult r;
    if (cmd == "verify-system") r = cmd_verify_system(cfg, ctx);
    else if (cmd == "simulate") r = cmd_simulate(cfg, ctx);
    else if (cmd == "sharpness") r = cmd_sharpness(cfg, ctx);
    else if (cmd == "eps-sweep") r = cmd_eps_sweep(cfg, ctx);
    else throw py::value_error("unknown command '" + cmd + "'");
    return py::make_tuple(r.exit_code, r.report.dump());
  });

  // ode_lab
  m.def("solve_cauchy",
        [](double a, double eps, double t_max, double tol) {
          Trajectory tr = solve_cauchy(a, eps, t_max, tol);
          std::vector<double> t(tr.t.begin(), tr.t.end()), y(tr.y.begin(), tr.y.end());
          return py::make_tuple(t, y, to_string(tr.status), static_cast<double>(tr.event_time));
        },
        py::arg("a"), py::arg("eps"), py::arg("t_max") = 60.0, py::arg("tol") = 1e-10);
  m.def("a_eps_curve",
        [](double a, const std::vector<double>& eps, double t_max) {
          std::vector<py::tuple> out;
          for (const auto& p : a_eps_curve(a, eps, t_max))
            out.push_back(py::make_tuple(p.eps, static_cast<double>(p.a_eps), p.capped));
          return out;
        },
        py::arg("a"), py::arg("eps"), py::arg("t_max") = 60.0);
  m.def("delta0", [](double a) { return static_cast<double>(delta0(a)); });
  m.def("liouville_F_log", &liouville_F_log);
  m.def("u0_reference", &u0_reference);

  // exact solutions and the sharp Harnack data
  m.def("exact_log_u",
        [](double a, int n, std::array<double, 2> x0, double C, std::array<double, 2> x,
           double t) { return exact_log_eval(ExactLogSolution{a, n, x0, C}, x, t); });
  m.def("exact_log_residual",
        [](double a, int n, std::array<double, 2> x0, double C, std::array<double, 2> x,
           double t) { return exact_log_residual(ExactLogSolution{a, n, x0, C}, x, t); });
  m.def("sharp_x0", &sharp_x0, py::arg("a"), py::arg("t1"), py::arg("t2"), py::arg("x1"),
        py::arg("x2"), py::arg("dim") = 1);
  m.def("verify_sharp_harnack",
        [](double a, int n, double t1, double t2, Point x1, Point x2, std::optional<Point> x0) {
          SharpHarnackReport r = verify_sharp_harnack(a, n, t1, t2, x1, x2, x0);
          py::dict d;
          d["x0"] = r.x0;
          d["lhs"] = r.lhs;
          d["rhs"] = r.rhs;
          d["slack"] = r.slack;
          d["equality"] = r.equality;
          d["holds"] = r.holds;
          return d;
        },
        py::arg("a"), py::arg("n"), py::arg("t1"), py::arg("t2"), py::arg("x1"), py::arg("x2"),
        py::arg("x0") = std::nullopt);
  m.def("min_energy", &min_energy);
  m.def("harnack_rhs_log",
        [](const std::string& id, const std::string& params, double t1, double t2, double dist) {
          CatalogEntry e = entry_from(id, params);
          double a = std::get<LogEq>(e.eq.kind()).a;
          return harnack_rhs_log(e.cand, a, t1, t2, dist);
        });
}

// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "quadrelax/analysis.hpp"
#include "quadrelax/io.hpp"
#include "quadrelax/mip.hpp"
#include "quadrelax/recovery.hpp"
#include "quadrelax/relaxer.hpp"
#include "quadrelax/sawtooth.hpp"

namespace py = pybind11;
using namespace quadrelax;

namespace {

RelaxConfig make_config(const std::string& method, int L, int L1, double lambda) {
  RelaxConfig cfg;
  cfg.method = method_from_string(method);
  cfg.L = L;
  if (L1 > 0) {
    cfg.L1 = L1;
  } else {
    // Same default as the CLI: max{2, ceil(1.5 L)} when tightening.
    cfg.L1 = method_is_tightened(cfg.method)
                 ? std::max(2, static_cast<int>(std::ceil(1.5 * L)))
                 : L;
  }
  cfg.lambda = lambda;
  cfg.validate();
  return cfg;
}

py::dict mip_result_to_dict(const MipResult& res) {
  py::dict d;
  d["status"] = std::string(to_string(res.status));
  d["dual_bound"] = res.dual_bound;
  d["node_count"] = res.node_count;
  if (res.incumbent) {
    d["objective"] = res.incumbent->objective_value;
    d["values"] = res.incumbent->values;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "MIP relaxations of box-bounded MIQCQPs: McCormick, sawtooth, NMDT, D-NMDT";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<NonFiniteBoundsError>(m, "NonFiniteBoundsError");

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi);

  py::class_<QuadTriplet>(m, "QuadTriplet")
      .def(py::init([](int i, int k, double coeff) { return QuadTriplet{i, k, coeff}; }),
           py::arg("i"), py::arg("k"), py::arg("coeff"))
      .def_readwrite("i", &QuadTriplet::i)
      .def_readwrite("k", &QuadTriplet::k)
      .def_readwrite("coeff", &QuadTriplet::coeff);

  py::class_<QuadForm>(m, "QuadForm")
      .def(py::init<>())
      .def_readwrite("q", &QuadForm::q)
      .def_readwrite("c", &QuadForm::c)
      .def_readwrite("d", &QuadForm::d)
      .def_readwrite("b", &QuadForm::b)
      .def("evaluate", &QuadForm::evaluate, py::arg("x"), py::arg("y") = std::vector<double>{});

  py::class_<MiqcqpInstance>(m, "Instance")
      .def(py::init<>())
      .def_readwrite("n", &MiqcqpInstance::n)
      .def_readwrite("k", &MiqcqpInstance::k)
      .def_readwrite("bounds", &MiqcqpInstance::bounds)
      .def_readwrite("objective", &MiqcqpInstance::objective)
      .def_readwrite("constraints", &MiqcqpInstance::constraints)
      .def("objective_value", &MiqcqpInstance::objective_value, py::arg("x"),
           py::arg("y") = std::vector<double>{})
      .def("max_constraint_violation", &MiqcqpInstance::max_constraint_violation, py::arg("x"),
           py::arg("y") = std::vector<double>{})
      .def("validate", &MiqcqpInstance::validate);

  py::class_<MipModel>(m, "MipModel")
      .def_property_readonly("num_vars", &MipModel::num_vars)
      .def_property_readonly("num_rows", &MipModel::num_rows)
      .def_property_readonly("num_binaries", &MipModel::num_binaries)
      .def("var_name", [](const MipModel& mm, int v) { return mm.var(v).name; })
      .def("objective_value", &MipModel::objective_value)
      .def("max_violation", &MipModel::max_violation);

  py::class_<RelaxationResult>(m, "Relaxation")
      .def_readonly("model", &RelaxationResult::model)
      .def_property_readonly("digit_binaries",
                             [](const RelaxationResult& r) { return r.actual_counts.binaries; })
      .def_property_readonly("rows",
                             [](const RelaxationResult& r) { return r.actual_counts.rows; })
      .def_property_readonly("predicted_binaries",
                             [](const RelaxationResult& r) { return r.predicted_counts.binaries; })
      .def_property_readonly(
          "predicted_rows", [](const RelaxationResult& r) { return r.predicted_counts.rows; })
      .def_property_readonly("num_terms",
                             [](const RelaxationResult& r) { return r.term_map.terms.size(); })
      .def("original_x", &RelaxationResult::original_x)
      .def("original_y", &RelaxationResult::original_y)
      .def("export_lp", [](const RelaxationResult& r, const std::string& path) {
        export_lp_file(r.model, path);
      })
      .def("write_term_map",
           [](const RelaxationResult& r, const std::string& path) { write_term_map_json(r, path); });

  m.def("parse_native", &parse_native, py::arg("path"));
  m.def(
      "parse_boxqp",
      [](const std::string& path, bool maximize) { return parse_boxqp(path, maximize).instance; },
      py::arg("path"), py::arg("maximize") = false);
  m.def("write_native", &write_native, py::arg("instance"), py::arg("path"));

  m.def(
      "build_relaxation",
      [](const MiqcqpInstance& inst, const std::string& method, int L, int L1, double lambda) {
        return build_relaxation(inst, make_config(method, L, L1, lambda));
      },
      py::arg("instance"), py::arg("method") = "dnmdt", py::arg("L") = 1, py::arg("L1") = 0,
      py::arg("lambda_") = 0.5);

  m.def(
      "solve_lp",
      [](const MipModel& model) {
        const Solution sol = solve_lp(model);
        py::dict d;
        d["status"] = std::string(to_string(sol.status));
        if (sol.status == SolveStatus::Optimal) {
          d["objective"] = sol.objective_value;
          d["values"] = sol.values;
        }
        return d;
      },
      py::arg("model"));

  m.def(
      "solve_mip",
      [](const MipModel& model, double rel_gap, long max_nodes, double max_seconds) {
        SolveLimits limits;
        limits.rel_gap = rel_gap;
        limits.max_nodes = max_nodes;
        limits.max_seconds = max_seconds;
        return mip_result_to_dict(solve_mip(model, limits));
      },
      py::arg("model"), py::arg("rel_gap") = 1e-4, py::arg("max_nodes") = 100000000L,
      py::arg("max_seconds") = 1e18);

  m.def(
      "primal_recovery",
      [](const MiqcqpInstance& inst, const std::vector<double>& x, const std::vector<double>& y) {
        const RecoveryResult rec = primal_recovery(inst, x, y);
        py::dict d;
        d["x"] = rec.x;
        d["y"] = rec.y;
        d["objective"] = rec.objective;
        d["max_violation"] = rec.max_violation;
        d["feasible"] = rec.feasible;
        return d;
      },
      py::arg("instance"), py::arg("x"), py::arg("y") = std::vector<double>{});

  m.def("compute_gap", &compute_gap, py::arg("primal"), py::arg("dual"));
  m.def("tooth_iterate", &tooth_iterate, py::arg("x"), py::arg("j"));
  m.def("sawtooth_value", &sawtooth_value, py::arg("x"), py::arg("L"));

  m.def(
      "max_error_theoretical",
      [](const std::string& surface, int L) {
        for (ErrorSurface s :
             {ErrorSurface::McCormickBilinear, ErrorSurface::McCormickSquare,
              ErrorSurface::NmdtBilinear, ErrorSurface::NmdtSquare, ErrorSurface::DnmdtBilinear,
              ErrorSurface::DnmdtSquare, ErrorSurface::SawtoothEpigraph}) {
          if (surface == to_string(s)) return max_error_theoretical(s, L);
        }
        throw ConfigError("unknown error surface '" + surface + "'");
      },
      py::arg("surface"), py::arg("L"));

  m.def(
      "analyze",
      [](const std::string& method, int L, int L1, double lambda, long samples, long resolution,
         uint64_t seed) {
        py::list out;
        for (const ErrorReportRow& row :
             analyze_method(method_from_string(method), L, L1 > 0 ? L1 : L, lambda, samples,
                            resolution, seed)) {
          py::dict d;
          d["method"] = std::string(to_string(row.method));
          d["surface"] = std::string(to_string(row.surface));
          d["L"] = row.L;
          d["L1"] = row.L1;
          d["max_error_theory"] = row.max_error_theory;
          d["max_error_empirical"] = row.max_error_empirical;
          d["avg_width_theory"] = row.avg_width_theory;
          d["avg_width_empirical"] = row.avg_width_empirical;
          d["avg_width_stderr"] = row.avg_width_stderr;
          d["lp_volume"] = row.lp_volume;
          d["lp_volume_stderr"] = row.lp_volume_stderr;
          out.append(d);
        }
        return out;
      },
      py::arg("method"), py::arg("L"), py::arg("L1") = 0, py::arg("lambda_") = 0.5,
      py::arg("samples") = 100000, py::arg("resolution") = 100000, py::arg("seed") = 42);

  m.def("shifted_geomean", &shifted_geomean, py::arg("values"), py::arg("shift") = 10.0);
  m.def("breakpoint_objective", &breakpoint_objective, py::arg("lx"), py::arg("ly"));

  m.def(
      "performance_profile",
      [](const std::vector<std::string>& solvers, const std::vector<std::string>& instances,
         const std::vector<std::vector<double>>& bounds) {
        ProfileInput in;
        in.solver_names = solvers;
        in.instance_names = instances;
        in.bounds = bounds;
        const ProfileTable t = performance_profile(in);
        py::dict d;
        d["ratios"] = t.ratios;
        py::dict steps;
        for (size_t s = 0; s < t.solver_names.size(); ++s) {
          py::list pts;
          for (const ProfileStep& st : t.steps[s]) pts.append(py::make_tuple(st.tau, st.p));
          steps[py::str(t.solver_names[s])] = pts;
        }
        d["steps"] = steps;
        return d;
      },
      py::arg("solvers"), py::arg("instances"), py::arg("bounds"));
}

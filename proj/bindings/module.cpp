// Python bindings: the builders, scheme analysis, correlation statistics,
// the randomized theorem suites, the quadrature sweep, scenario loading and
// the brute-force oracle. Matrices cross the boundary as numpy arrays.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmlab/correlate.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/models.hpp"
#include "qmlab/oracle.hpp"
#include "qmlab/report.hpp"
#include "qmlab/scenario.hpp"
#include "qmlab/transformer.hpp"
#include "qmlab/verify.hpp"

#include <string>
#include <vector>

namespace py = pybind11;
using namespace qmlab;

namespace {

py::dict stats_dict(const correlate::CorrStats& st) {
    py::dict d;
    d["defined"] = st.defined;
    d["rho"] = st.rho;
    d["eps1"] = st.eps1;
    d["eps2"] = st.eps2;
    d["eps12"] = st.eps12;
    d["sigma1"] = st.sigma1;
    d["sigma2"] = st.sigma2;
    return d;
}

py::dict verdict_dict(transformer::Verdict v, double defect) {
    py::dict d;
    d["verdict"] = transformer::to_string(v);
    d["defect"] = defect;
    return d;
}

py::list components_list(const scheme::MeasurementScheme& s, const quantum::State& t,
                         const scheme::ReadingScale& r) {
    py::list out;
    for (const auto& c : s.all_components(t, r)) {
        py::dict d;
        d["cell"] = c.cell;
        d["weight"] = c.weight;
        if (c.object) {
            d["object"] = c.object->matrix();
            d["apparatus"] = c.apparatus->matrix();
        } else {
            d["object"] = py::none();
            d["apparatus"] = py::none();
        }
        out.append(std::move(d));
    }
    return out;
}

py::list povm_list(const quantum::Povm& p) {
    py::list out;
    for (int i = 0; i < p.size(); ++i) {
        py::dict d;
        d["matrix"] = p.at(i).matrix;
        d["label"] = p.at(i).label;
        out.append(std::move(d));
    }
    return out;
}

scheme::ReadingScale scale_from_cells(
    const std::vector<std::pair<std::vector<int>, double>>& cells, int n_pointer) {
    std::vector<scheme::ReadingCell> rc;
    rc.reserve(cells.size());
    for (const auto& [indices, value] : cells) rc.push_back({indices, value});
    return scheme::ReadingScale(std::move(rc), n_pointer);
}

} // namespace

PYBIND11_MODULE(_qmlab, m) {
    m.doc() = "Finite-dimensional laboratory for quantum measurement schemes";

    // --- states, effects, observables ---------------------------------------
    py::class_<quantum::State>(m, "State")
        .def(py::init<CMatrix, double>(), py::arg("matrix"), py::arg("tol") = 1e-10)
        .def_static("vector",
                    [](const CVector& psi) { return quantum::State::vector_state(psi); },
                    py::arg("psi"))
        .def_property_readonly("matrix", &quantum::State::matrix,
                               py::return_value_policy::copy)
        .def_property_readonly("dim", &quantum::State::dim);

    py::class_<quantum::Povm>(m, "Povm")
        .def(py::init([](const std::vector<std::pair<CMatrix, double>>& effects) {
                 std::vector<quantum::Effect> es;
                 es.reserve(effects.size());
                 for (const auto& [mat, label] : effects) es.emplace_back(mat, label);
                 return quantum::Povm(std::move(es));
             }),
             py::arg("effects"), "Build from a list of (matrix, label) pairs")
        .def_property_readonly("size", &quantum::Povm::size)
        .def("effects", [](const quantum::Povm& p) { return povm_list(p); });

    m.def("basis_povm", &quantum::basis_povm, py::arg("dim"),
          "Rank-one projections onto the computational basis, labelled 0..d-1");
    m.def("is_sharp", [](const quantum::Povm& p, double tol) {
        const auto rep = quantum::is_sharp(p, tol);
        py::dict d;
        d["sharp"] = rep.sharp;
        d["worst_idempotency"] = rep.worst_idempotency;
        d["worst_cross"] = rep.worst_cross;
        return d;
    }, py::arg("povm"), py::arg("tol") = 1e-10);

    // --- couplings, scales, schemes ------------------------------------------
    py::class_<scheme::Coupling>(m, "Coupling")
        .def_static("unitary", &scheme::Coupling::unitary, py::arg("matrix"),
                    py::arg("dim_object"), py::arg("dim_apparatus"),
                    py::arg("tol") = 1e-9)
        .def_static("product", &scheme::Coupling::product, py::arg("object_gen"),
                    py::arg("apparatus_gen"), py::arg("lam"), py::arg("tol") = 1e-10)
        .def_static("channel", &scheme::Coupling::channel, py::arg("kraus"),
                    py::arg("dim_object"), py::arg("dim_apparatus"),
                    py::arg("tol") = 1e-9)
        .def_property_readonly("dim_object", &scheme::Coupling::dim_object)
        .def_property_readonly("dim_apparatus", &scheme::Coupling::dim_apparatus)
        .def_property_readonly("is_unitary", &scheme::Coupling::is_unitary)
        .def("dense_unitary", &scheme::Coupling::dense_unitary);

    py::class_<scheme::ReadingScale>(m, "ReadingScale")
        .def(py::init(&scale_from_cells), py::arg("cells"), py::arg("n_pointer"),
             "cells: list of (pointer_indices, value) pairs")
        .def_property_readonly("size", &scheme::ReadingScale::size)
        .def_property_readonly("values", &scheme::ReadingScale::values)
        .def("cells", [](const scheme::ReadingScale& r) {
            py::list out;
            for (int i = 0; i < r.size(); ++i)
                out.append(py::make_tuple(r.cell(i).pointer_indices, r.cell(i).value));
            return out;
        });

    py::class_<scheme::MeasurementScheme>(m, "MeasurementScheme")
        .def(py::init<scheme::Coupling, quantum::State, quantum::Povm,
                      std::vector<int>>(),
             py::arg("coupling"), py::arg("apparatus_state"), py::arg("pointer"),
             py::arg("pointer_map") = std::vector<int>{})
        .def_property_readonly("dim_object", &scheme::MeasurementScheme::dim_object)
        .def_property_readonly("dim_apparatus",
                               &scheme::MeasurementScheme::dim_apparatus)
        .def_property_readonly("apparatus_state",
                               &scheme::MeasurementScheme::apparatus_state,
                               py::return_value_policy::copy)
        .def("default_scale", &scheme::MeasurementScheme::default_scale)
        .def("measured_povm",
             [](const scheme::MeasurementScheme& s, const scheme::ReadingScale& r) {
                 return povm_list(s.measured_povm(r));
             },
             py::arg("scale"))
        .def("components", &components_list, py::arg("input"), py::arg("scale"),
             "Per-cell weight and normalized object/apparatus component states")
        .def("final_reduced_object",
             [](const scheme::MeasurementScheme& s, const quantum::State& t) {
                 return s.joint_final(t).reduced_object();
             },
             py::arg("input"))
        .def("final_reduced_apparatus",
             [](const scheme::MeasurementScheme& s, const quantum::State& t) {
                 return s.joint_final(t).reduced_apparatus();
             },
             py::arg("input"))
        .def("check_object_additivity",
             [](const scheme::MeasurementScheme& s, const quantum::State& t,
                const scheme::ReadingScale& r) {
                 const auto rep = s.check_object_additivity(t, r);
                 py::dict d;
                 d["ok"] = rep.ok;
                 d["residual"] = rep.residual;
                 return d;
             },
             py::arg("input"), py::arg("scale"))
        .def("check_pointer_mixture",
             [](const scheme::MeasurementScheme& s, const quantum::State& t,
                const scheme::ReadingScale& r) {
                 const auto rep = s.check_pointer_mixture(t, r);
                 py::dict d;
                 d["ok"] = rep.ok;
                 d["residual"] = rep.residual;
                 return d;
             },
             py::arg("input"), py::arg("scale"))
        .def("check_pointer_value_definiteness",
             [](const scheme::MeasurementScheme& s, const quantum::State& t,
                const scheme::ReadingScale& r) {
                 const auto rep = s.check_pointer_value_definiteness(t, r);
                 py::dict d;
                 d["all_ok"] = rep.all_ok;
                 d["worst_prob_defect"] = rep.worst_prob_defect;
                 d["worst_eigen_defect"] = rep.worst_eigen_defect;
                 return d;
             },
             py::arg("input"), py::arg("scale"))
        .def("check_component_orthogonality",
             [](const scheme::MeasurementScheme& s, const quantum::State& t,
                const scheme::ReadingScale& r) {
                 const auto rep = s.check_component_orthogonality(t, r);
                 py::dict d;
                 d["ok"] = rep.ok;
                 d["worst_off_diagonal"] = rep.worst_off_diagonal;
                 d["table"] = rep.table;
                 return d;
             },
             py::arg("input"), py::arg("scale"));

    // --- state transformer ----------------------------------------------------
    m.def("transformer_apply",
          [](const scheme::MeasurementScheme& s, const scheme::ReadingScale& r, int i,
             const quantum::State& t) {
              return transformer::StateTransformer(s, r).apply(i, t);
          },
          py::arg("scheme"), py::arg("scale"), py::arg("cell"), py::arg("input"),
          "Unnormalized post-measurement object state for one reading cell");
    m.def("transformer_checks",
          [](const scheme::MeasurementScheme& s, const scheme::ReadingScale& r,
             int n_random, std::uint64_t seed) {
              const transformer::StateTransformer tr(s, r);
              const auto states =
                  transformer::test_state_set(s.dim_object(), n_random, seed);
              const auto fk = transformer::check_first_kind(tr, states);
              const auto rep = transformer::check_repeatable(tr, states);
              const auto comp = transformer::check_repeat_composition(tr, states);
              py::dict d;
              d["first_kind"] = verdict_dict(fk.verdict, fk.max_deviation);
              d["repeatable"] = verdict_dict(
                  rep.verdict, std::max(rep.worst_prob_defect, rep.worst_eigen_defect));
              d["composition"] = verdict_dict(comp.verdict, comp.worst_defect);
              return d;
          },
          py::arg("scheme"), py::arg("scale"), py::arg("n_random") = 20,
          py::arg("seed") = 7,
          "First-kind, repeatability and composition checks over a spanning state set");

    // --- correlations -----------------------------------------------------------
    m.def("observable_bivariate",
          [](const scheme::MeasurementScheme& s, const quantum::State& t,
             const scheme::ReadingScale& r) {
              const auto d = correlate::observable_bivariate(s, t, r);
              py::dict out;
              out["row_values"] = d.row_values();
              out["col_values"] = d.col_values();
              out["table"] = d.table();
              return out;
          },
          py::arg("scheme"), py::arg("input"), py::arg("scale"));
    m.def("observable_correlation",
          [](const scheme::MeasurementScheme& s, const quantum::State& t,
             const scheme::ReadingScale& r) {
              return stats_dict(correlate::observable_correlation(s, t, r));
          },
          py::arg("scheme"), py::arg("input"), py::arg("scale"));
    m.def("value_correlation",
          [](const scheme::MeasurementScheme& s, const quantum::State& t,
             const scheme::ReadingScale& r, int i) {
              return stats_dict(correlate::value_correlation(s, t, r, i));
          },
          py::arg("scheme"), py::arg("input"), py::arg("scale"), py::arg("cell"));
    m.def("state_correlation",
          [](const scheme::MeasurementScheme& s, const quantum::State& t,
             const scheme::ReadingScale& r, int i) {
              return stats_dict(correlate::state_correlation(s, t, r, i));
          },
          py::arg("scheme"), py::arg("input"), py::arg("scale"), py::arg("cell"));
    m.def("reduced_state_correlation",
          [](const scheme::MeasurementScheme& s, const quantum::State& t) {
              const auto rep = correlate::reduced_state_correlation(s, t);
              py::dict d = stats_dict(rep.stats);
              d["object_spectrum"] = rep.object_spectrum;
              d["apparatus_spectrum"] = rep.apparatus_spectrum;
              return d;
          },
          py::arg("scheme"), py::arg("input"));

    // --- model builders -----------------------------------------------------
    m.def("build_cnot", &models::build_cnot);
    m.def("build_controlled_rotation", &models::build_controlled_rotation,
          py::arg("theta"));
    m.def("build_shift_model", &models::build_shift_model, py::arg("n"),
          py::arg("eigenvalues"));
    m.def("vacuum_state", &models::vacuum_state, py::arg("n"));
    m.def("coherent_state", &models::coherent_state, py::arg("n"), py::arg("alpha"));
    m.def("squeezed_probe", &models::squeezed_probe, py::arg("n"), py::arg("r"));

    py::class_<models::QuadratureModel>(m, "QuadratureModel")
        .def_readonly("n", &models::QuadratureModel::n)
        .def_readonly("lam", &models::QuadratureModel::lambda)
        .def_readonly("commutator_defect", &models::QuadratureModel::commutator_defect)
        .def_readonly("response", &models::QuadratureModel::response)
        .def_readonly("shifted_top_mass", &models::QuadratureModel::shifted_top_mass)
        .def_readonly("scheme", &models::QuadratureModel::scheme)
        .def_readonly("scale", &models::QuadratureModel::scale)
        .def_readonly("fine_scale", &models::QuadratureModel::fine_scale);
    m.def("build_quadrature_model", &models::build_quadrature_model, py::arg("n"),
          py::arg("lam"), py::arg("probe"), py::arg("signal"), py::arg("bins"));

    m.def("quadrature_sweep",
          [](Index n, const CVector& probe, const quantum::State& signal,
             const std::vector<double>& lambdas, Index bins) {
              py::list out;
              for (const auto& row :
                   models::quadrature_correlation_sweep(n, probe, signal, lambdas, bins)) {
                  py::dict d;
                  d["lam"] = row.lambda;
                  d["var_aq"] = row.var_aq;
                  d["var_bp_scaled"] = row.var_bp_scaled;
                  d["var_E"] = row.var_e;
                  d["rho_obs"] = row.rho_obs;
                  d["rho_value_cell0"] = row.rho_value_cell0;
                  d["truncation_defect"] = row.truncation_defect;
                  out.append(std::move(d));
              }
              return out;
          },
          py::arg("n"), py::arg("probe"), py::arg("signal"), py::arg("lambdas"),
          py::arg("bins") = 2,
          "One row per coupling strength: variance decomposition and correlations");

    // --- theorem suites -------------------------------------------------------
    m.def("verify_theorems",
          [](std::uint64_t seed, int count, bool inject_bug) {
              const auto rep = verify::verify_theorems(seed, count, inject_bug);
              py::dict d;
              d["seed"] = rep.seed;
              d["count"] = rep.count;
              d["passed"] = rep.passed;
              d["failed"] = rep.failed;
              d["inconclusive"] = rep.inconclusive;
              d["skipped"] = rep.skipped;
              d["all_ok"] = rep.all_ok;
              py::list suites;
              for (const auto& s : rep.suites) {
                  py::dict sd;
                  sd["name"] = s.name;
                  sd["passed"] = s.passed;
                  sd["failed"] = s.failed;
                  sd["inconclusive"] = s.inconclusive;
                  sd["skipped"] = s.skipped;
                  sd["worst_premise"] = s.worst_premise;
                  sd["worst_conclusion"] = s.worst_conclusion;
                  suites.append(std::move(sd));
              }
              d["suites"] = std::move(suites);
              d["text"] = verify::render_report(rep);
              return d;
          },
          py::arg("seed") = 1, py::arg("count") = 100, py::arg("inject_bug") = false,
          "Run the randomized theorem suites; deterministic for a fixed seed");

    // --- scenarios and the brute-force oracle ---------------------------------
    py::class_<scenario::Scenario>(m, "Scenario")
        .def_readonly("scheme", &scenario::Scenario::scheme)
        .def_readonly("input", &scenario::Scenario::input)
        .def_readonly("scale", &scenario::Scenario::scale)
        .def_readonly("name", &scenario::Scenario::name);
    m.def("load_scenario", &scenario::load, py::arg("ref"),
          "Load a scenario JSON file or builtin:NAME[?k=v&...]");
    m.def("scenario_from_json", &scenario::from_json_text, py::arg("text"),
          py::arg("origin") = std::string("inline"));

    m.def("oracle_cross_check",
          [](const scenario::Scenario& sc, double tol) {
              const auto rep = oracle::cross_check(sc, tol);
              py::dict d;
              d["ok"] = rep.ok;
              d["max_discrepancy"] = rep.max_discrepancy;
              d["tol"] = rep.tol;
              py::list entries;
              for (const auto& e : rep.entries)
                  entries.append(py::make_tuple(e.what, e.discrepancy));
              d["entries"] = std::move(entries);
              d["text"] = oracle::render_report(rep);
              return d;
          },
          py::arg("scenario"), py::arg("tol") = 1e-8,
          "Recompute everything by brute force and report the worst discrepancy");
}

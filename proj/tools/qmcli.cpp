// qmcli: command-line front end for the measurement-scheme laboratory.
//
//   simulate  run one scenario and print everything the library derives
//   verify    run the randomized theorem suites
//   sweep     coupling-strength sweep of the quadrature model, CSV output
//   oracle    cross-check a scenario against the brute-force reference
//
// Exit codes: 0 success, 1 a checked property failed (or an internal
// reconstruction disagreed), 2 invalid input, 3 dimension out of range,
// 4 truncation guard tripped.

#include <CLI11.hpp>

#include "qmlab/correlate.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/models.hpp"
#include "qmlab/oracle.hpp"
#include "qmlab/report.hpp"
#include "qmlab/scenario.hpp"
#include "qmlab/transformer.hpp"
#include "qmlab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace {

using namespace qmlab;

constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitDimension = 3;
constexpr int kExitTruncation = 4;

std::string fmt_complex(const Complex& z) {
    if (std::abs(z.imag()) < 1e-15) return report::fmt(z.real());
    return report::fmt(z.real()) + (z.imag() >= 0 ? "+" : "-") +
           report::fmt(std::abs(z.imag())) + "i";
}

// Full matrix for small dimensions, diagonal summary beyond.
void print_matrix(const char* label, const CMatrix& m) {
    if (m.rows() <= 6) {
        for (Index i = 0; i < m.rows(); ++i) {
            std::string row = std::string(label) + " row=" + std::to_string(i) + " [";
            for (Index j = 0; j < m.cols(); ++j) {
                if (j) row += ", ";
                row += fmt_complex(m(i, j));
            }
            std::printf("%s]\n", row.c_str());
        }
        return;
    }
    std::string diag = std::string(label) + " diag=[";
    for (Index i = 0; i < m.rows(); ++i) {
        if (i) diag += ", ";
        diag += fmt_complex(m(i, i));
    }
    std::printf("%s] trace=%s\n", diag.c_str(), report::fmt(m.trace().real()).c_str());
}

const char* kind_name(scheme::Coupling::Kind k) {
    switch (k) {
    case scheme::Coupling::Kind::Unitary: return "unitary";
    case scheme::Coupling::Kind::ProductUnitary: return "product";
    case scheme::Coupling::Kind::Channel: return "channel";
    }
    return "?";
}

bool warn_if_inconclusive(const char* what, transformer::Verdict v) {
    if (v == transformer::Verdict::Inconclusive) {
        std::printf("WARN %s borderline: defect inside the numerics band\n", what);
        return true;
    }
    return false;
}

void print_corr(const std::string& label, const correlate::CorrStats& st) {
    if (!st.defined) {
        std::printf("%s defined=0\n", label.c_str());
        return;
    }
    std::printf("%s defined=1 rho=%s eps1=%s eps2=%s eps12=%s sigma1=%s sigma2=%s\n",
                label.c_str(), report::fmt(st.rho).c_str(), report::fmt(st.eps1).c_str(),
                report::fmt(st.eps2).c_str(), report::fmt(st.eps12).c_str(),
                report::fmt(st.sigma1).c_str(), report::fmt(st.sigma2).c_str());
}

int cmd_simulate(const std::string& ref) {
    const scenario::Scenario sc = scenario::load(ref);
    const scheme::MeasurementScheme& s = sc.scheme;
    const scheme::ReadingScale& r = sc.scale;

    std::printf("scenario name=%s object_dim=%d apparatus_dim=%d cells=%d coupling=%s\n",
                sc.name.c_str(), static_cast<int>(s.dim_object()),
                static_cast<int>(s.dim_apparatus()), r.size(),
                kind_name(s.coupling().kind()));

    const quantum::Povm povm = s.measured_povm(r);
    const auto sharp = quantum::is_sharp(povm);
    std::printf("observable sharp=%d worst_idempotency=%s worst_cross=%s\n", sharp.sharp,
                report::fmt(sharp.worst_idempotency).c_str(),
                report::fmt(sharp.worst_cross).c_str());

    const auto comps = s.all_components(sc.input, r);
    for (int i = 0; i < r.size(); ++i) {
        std::printf("cell index=%d value=%s weight=%s\n", i,
                    report::fmt(r.cell(i).value).c_str(),
                    report::fmt(comps[static_cast<size_t>(i)].weight).c_str());
        print_matrix(("effect cell=" + std::to_string(i)).c_str(), povm.at(i).matrix);
        if (comps[static_cast<size_t>(i)].object) {
            print_matrix(("object_component cell=" + std::to_string(i)).c_str(),
                         comps[static_cast<size_t>(i)].object->matrix());
            print_matrix(("apparatus_component cell=" + std::to_string(i)).c_str(),
                         comps[static_cast<size_t>(i)].apparatus->matrix());
        }
    }

    const auto add = s.check_object_additivity(sc.input, r);
    std::printf("check object_additivity ok=%d residual=%s\n", add.ok,
                report::fmt(add.residual).c_str());
    const auto mix = s.check_pointer_mixture(sc.input, r);
    std::printf("check pointer_mixture ok=%d residual=%s\n", mix.ok,
                report::fmt(mix.residual).c_str());
    const auto pvd = s.check_pointer_value_definiteness(sc.input, r);
    std::printf("check pointer_value_definiteness ok=%d worst_prob=%s worst_eigen=%s\n",
                pvd.all_ok, report::fmt(pvd.worst_prob_defect).c_str(),
                report::fmt(pvd.worst_eigen_defect).c_str());
    const auto orth = s.check_component_orthogonality(sc.input, r);
    std::printf("check component_orthogonality ok=%d worst_off_diagonal=%s\n", orth.ok,
                report::fmt(orth.worst_off_diagonal).c_str());

    const transformer::StateTransformer tr(s, r);
    const auto states = transformer::test_state_set(s.dim_object(), 5);
    const auto fk = transformer::check_first_kind(tr, states);
    std::printf("check first_kind verdict=%s max_deviation=%s\n",
                transformer::to_string(fk.verdict).c_str(),
                report::fmt(fk.max_deviation).c_str());
    warn_if_inconclusive("first_kind", fk.verdict);
    const auto rep = transformer::check_repeatable(tr, states);
    std::printf("check repeatable verdict=%s worst_prob=%s worst_eigen=%s\n",
                transformer::to_string(rep.verdict).c_str(),
                report::fmt(rep.worst_prob_defect).c_str(),
                report::fmt(rep.worst_eigen_defect).c_str());
    warn_if_inconclusive("repeatable", rep.verdict);
    const auto comp2 = transformer::check_repeat_composition(tr, states);
    std::printf("check repeat_composition verdict=%s worst_defect=%s\n",
                transformer::to_string(comp2.verdict).c_str(),
                report::fmt(comp2.worst_defect).c_str());
    warn_if_inconclusive("repeat_composition", comp2.verdict);

    print_corr("correlation observable", correlate::observable_correlation(s, sc.input, r));
    for (int i = 0; i < r.size(); ++i) {
        print_corr("correlation value cell=" + std::to_string(i),
                   correlate::value_correlation(s, sc.input, r, i));
        print_corr("correlation state cell=" + std::to_string(i),
                   correlate::state_correlation(s, sc.input, r, i));
    }
    try {
        const auto rs = correlate::reduced_state_correlation(s, sc.input);
        print_corr("correlation reduced_state", rs.stats);
    } catch (const ValidationError&) {
        std::printf("correlation reduced_state defined=0\n");
    }
    return 0;
}

int cmd_verify(std::uint64_t seed, int count, bool inject_bug) {
    const verify::TheoremReport rep = verify::verify_theorems(seed, count, inject_bug);
    std::fputs(verify::render_report(rep).c_str(), stdout);
    return rep.failed == 0 ? 0 : kExitCheckFailed;
}

CVector parse_probe(const std::string& spec, Index n) {
    if (spec == "vacuum") return models::vacuum_state(n);
    if (spec.rfind("squeezed:", 0) == 0) {
        try {
            return models::squeezed_probe(n, std::stod(spec.substr(9)));
        } catch (const std::logic_error&) {
            throw ValidationError("probe: bad squeezing parameter in '" + spec + "'");
        }
    }
    throw ValidationError("probe must be 'vacuum' or 'squeezed:R'");
}

quantum::State parse_signal(const std::string& spec, Index n) {
    if (spec == "vacuum") return quantum::State::vector_state(models::vacuum_state(n));
    if (spec.rfind("coherent:", 0) == 0) {
        try {
            return quantum::State::vector_state(
                models::coherent_state(n, std::stod(spec.substr(9))));
        } catch (const std::logic_error&) {
            throw ValidationError("signal: bad amplitude in '" + spec + "'");
        }
    }
    throw ValidationError("signal must be 'vacuum' or 'coherent:ALPHA'");
}

int cmd_sweep(Index n, const std::string& probe_spec, const std::string& signal_spec,
              Index bins, const std::vector<double>& lambdas, const std::string& out) {
    const auto rows = models::quadrature_correlation_sweep(
        n, parse_probe(probe_spec, n), parse_signal(signal_spec, n), lambdas, bins);
    const std::string csv = report::sweep_csv(rows);
    if (out.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ValidationError("cannot open output file: " + out);
        f << csv;
        std::printf("wrote %s rows=%zu\n", out.c_str(), rows.size());
    }

    // The fine-scale correlation must climb with the coupling strength and
    // stay below 1; a displaced probe that has outrun the truncated readout
    // range breaks this and is reported as a failure, not smoothed over.
    bool monotone = true, subunity = true, truncated = false;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i && rows[i].rho_obs <= rows[i - 1].rho_obs) monotone = false;
        if (rows[i].rho_obs >= 1.0) subunity = false;
        if (rows[i].truncation_defect > 1e-2) truncated = true;
    }
    const bool ok = monotone && subunity && !truncated;
    std::printf("sweep rows=%zu rho_monotone=%d rho_subunity=%d truncation_ok=%d result=%s\n",
                rows.size(), monotone, subunity, !truncated, ok ? "PASS" : "FAIL");
    return ok ? 0 : kExitCheckFailed;
}

int cmd_oracle(const std::string& ref, double tol) {
    const scenario::Scenario sc = scenario::load(ref);
    const oracle::OracleReport rep = oracle::cross_check(sc, tol);
    std::printf("oracle scenario=%s\n", sc.name.c_str());
    std::fputs(oracle::render_report(rep).c_str(), stdout);
    return rep.ok ? 0 : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional laboratory for quantum measurement schemes"};
    app.require_subcommand(1);

    std::string scenario_ref;
    auto* sim = app.add_subcommand("simulate", "Run one scenario and print the analysis");
    sim->add_option("--scenario", scenario_ref,
                    "Scenario JSON file or builtin:NAME[?k=v&...]")
        ->required();

    std::uint64_t seed = 1;
    int count = 100;
    bool inject_bug = false;
    auto* ver = app.add_subcommand("verify", "Run the randomized theorem suites");
    ver->add_option("--seed", seed, "Base RNG seed");
    ver->add_option("--count", count, "Instances per suite");
    ver->add_flag("--inject-bug", inject_bug,
                  "Deliberately corrupt one check to prove the harness can fail")
        ->group("");

    Index sweep_n = 32;
    std::string probe_spec = "vacuum";
    std::string signal_spec = "coherent:1";
    Index bins = 2;
    std::vector<double> lambdas{0.5, 1.0, 2.0};
    std::string out_path;
    auto* swp = app.add_subcommand("sweep", "Coupling-strength sweep of the quadrature model");
    swp->add_option("--N", sweep_n, "Truncation dimension");
    swp->add_option("--probe", probe_spec, "Probe: vacuum or squeezed:R");
    swp->add_option("--signal", signal_spec, "Signal: vacuum or coherent:ALPHA");
    swp->add_option("--bins", bins, "Reading-scale cells per side");
    swp->add_option("--lambdas", lambdas, "Coupling strengths")->delimiter(',');
    swp->add_option("--out", out_path, "CSV output path (stdout when absent)");

    std::string oracle_ref;
    double oracle_tol = 1e-8;
    auto* orc = app.add_subcommand("oracle", "Brute-force cross-check of a scenario");
    orc->add_option("--scenario", oracle_ref,
                    "Scenario JSON file or builtin:NAME[?k=v&...]")
        ->required();
    orc->add_option("--tol", oracle_tol, "Largest acceptable discrepancy");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (sim->parsed()) return cmd_simulate(scenario_ref);
        if (ver->parsed()) return cmd_verify(seed, count, inject_bug);
        if (swp->parsed())
            return cmd_sweep(sweep_n, probe_spec, signal_spec, bins, lambdas, out_path);
        if (orc->parsed()) return cmd_oracle(oracle_ref, oracle_tol);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDimension;
    } catch (const TruncationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitTruncation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailed;
    }
    return kExitInput;
}

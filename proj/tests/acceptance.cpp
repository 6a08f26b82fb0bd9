// Acceptance gate: one line per criterion, PASS or FAIL, with the pinned
// tolerances written into the checks themselves. The brute-force oracle gate
// runs first; the remaining criteria are evaluated regardless of its outcome
// but the process exit code is nonzero if any line fails.
//
// argv[1]: path to the qmcli binary (used for the CLI-level criteria).

#include "qmlab/correlate.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/models.hpp"
#include "qmlab/oracle.hpp"
#include "qmlab/random.hpp"
#include "qmlab/scenario.hpp"
#include "qmlab/transformer.hpp"
#include "qmlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

using namespace qmlab;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& text) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, text.c_str());
    if (!ok) ++g_failures;
}

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& cmd) {
    CliResult res;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return res;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// --- criterion 8 (gate): brute-force oracle on the small builtin fixtures ---
void criterion_8(const std::string& cli) {
    bool ok = true;
    std::string detail;
    for (const char* name : {"cnot", "crot", "shift3"}) {
        const auto res = run_cli(cli + " oracle --scenario builtin:" + name + " --tol 1e-8");
        const bool this_ok =
            res.exit_code == 0 && res.output.find("result=PASS") != std::string::npos;
        if (!this_ok) ok = false;
        detail += std::string(name) + (this_ok ? " ok " : " FAILED ");
    }
    report(8, ok,
           "oracle gate, discrepancy <= 1e-8 on every brute-force-sized builtin: " + detail +
               "(quad exceeds the oracle's joint-dimension bound and is cross-checked "
               "in the unit tests at N=16 instead)");
}

// --- criterion 1: basis-copy fixture ----------------------------------------
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sc = scenario::builtin("cnot");
    const auto& s = sc.scheme;
    const auto& r = sc.scale;
    bool ok = true;
    std::string why;

    const auto povm = s.measured_povm(r);
    CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    if (max_abs_diff(povm.at(0).matrix, p0) > 1e-12 ||
        max_abs_diff(povm.at(1).matrix, p1) > 1e-12) {
        ok = false;
        why += " povm!=basis-projections@1e-12";
    }
    if (!s.check_pointer_value_definiteness(sc.input, r).all_ok) {
        ok = false;
        why += " pvd";
    }
    if (!s.check_pointer_mixture(sc.input, r).ok) {
        ok = false;
        why += " mixture";
    }
    const transformer::StateTransformer tr(s, r);
    const auto states = transformer::test_state_set(2);
    if (transformer::check_first_kind(tr, states).verdict != transformer::Verdict::Holds) {
        ok = false;
        why += " first-kind";
    }
    if (transformer::check_repeatable(tr, states).verdict != transformer::Verdict::Holds) {
        ok = false;
        why += " repeatable";
    }
    const auto obs = correlate::observable_correlation(s, sc.input, r);
    if (!obs.defined || std::abs(obs.rho - 1.0) > 1e-10) {
        ok = false;
        why += " rho_obs=" + num(obs.rho);
    }
    for (int i = 0; i < r.size(); ++i) {
        const auto v = correlate::value_correlation(s, sc.input, r, i);
        const auto st = correlate::state_correlation(s, sc.input, r, i);
        if (!v.defined || std::abs(v.rho - 1.0) > 1e-10) {
            ok = false;
            why += " rho_value[" + std::to_string(i) + "]=" + num(v.rho);
        }
        if (!st.defined || std::abs(st.rho - 1.0) > 1e-10) {
            ok = false;
            why += " rho_state[" + std::to_string(i) + "]=" + num(st.rho);
        }
    }
    const double ms = ms_since(t0);
    if (ms > 1000.0) {
        ok = false;
        why += " runtime>1s";
    }
    report(1, ok,
           "basis-copy fixture: sharp basis observable, value-definite pointer, "
           "first-kind and repeatable, all correlations 1 within 1e-10 (" +
               num(ms) + " ms)" + why);
}

// --- criterion 2: partial-rotation fixture ----------------------------------
void criterion_2(const std::string& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sc = scenario::builtin("crot");
    const auto& s = sc.scheme;
    const auto& r = sc.scale;
    bool ok = true;
    std::string why;

    const auto povm = s.measured_povm(r);
    CMatrix e0 = CMatrix::Identity(2, 2), e1 = CMatrix::Zero(2, 2);
    e0(1, 1) = 0.5;
    e1(1, 1) = 0.5;
    if (max_abs_diff(povm.at(0).matrix, e0) > 1e-12 ||
        max_abs_diff(povm.at(1).matrix, e1) > 1e-12) {
        ok = false;
        why += " povm@1e-12";
    }

    const transformer::StateTransformer tr(s, r);
    const auto states = transformer::test_state_set(2);
    if (transformer::check_first_kind(tr, states).verdict != transformer::Verdict::Holds) {
        ok = false;
        why += " first-kind";
    }
    const auto rep_r = transformer::check_repeatable(tr, states);
    if (rep_r.verdict != transformer::Verdict::Fails) {
        ok = false;
        why += " repeatable-not-failing";
    }
    // Repeating after reading the moved cell reproduces it with chance 1/2:
    // condition the balanced input on cell 1, then measure again.
    const auto comp = s.component_states(sc.input, r, 1);
    const double p_repeat =
        comp.object ? quantum::prob(*comp.object, povm.at(1)) : -1.0;
    if (std::abs(p_repeat - 0.5) > 1e-10) {
        ok = false;
        why += " repeat_prob=" + num(p_repeat);
    }

    const auto obs = correlate::observable_correlation(s, sc.input, r);
    const auto val = correlate::value_correlation(s, sc.input, r, 1);
    const auto sta = correlate::state_correlation(s, sc.input, r, 1);
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    if (!obs.defined || std::abs(obs.rho - 1.0 / 3.0) > 1e-9) {
        ok = false;
        why += " rho_obs=" + num(obs.rho);
    }
    if (!val.defined || std::abs(val.rho - inv_sqrt3) > 1e-9) {
        ok = false;
        why += " rho_value=" + num(val.rho);
    }
    if (!sta.defined || std::abs(sta.rho - inv_sqrt3) > 1e-9) {
        ok = false;
        why += " rho_state=" + num(sta.rho);
    }

    const auto orep = oracle::cross_check(sc, 1e-10);
    if (!orep.ok) {
        ok = false;
        why += " oracle=" + num(orep.max_discrepancy);
    }
    const auto cli_res = run_cli(cli + " oracle --scenario builtin:crot --tol 1e-10");
    if (cli_res.exit_code != 0) {
        ok = false;
        why += " cli-oracle-exit=" + std::to_string(cli_res.exit_code);
    }

    const double ms = ms_since(t0);
    if (ms > 1000.0) {
        ok = false;
        why += " runtime>1s";
    }
    report(2, ok,
           "partial-rotation fixture: unsharp halved effect, first-kind but not "
           "repeatable (repeat chance 1/2), rho_obs=1/3 and cell-1 value/state "
           "correlations 1/sqrt(3) within 1e-9, oracle discrepancy <= 1e-10 (" +
               num(ms) + " ms)" + why);
}

// --- criterion 3: randomized theorem suites ---------------------------------
void criterion_3(const std::string& cli) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string why;

    const auto first = run_cli(cli + " verify --seed 1 --count 100");
    const auto second = run_cli(cli + " verify --seed 1 --count 100");
    if (first.exit_code != 0) {
        ok = false;
        why += " exit=" + std::to_string(first.exit_code);
    }
    if (first.output.find("result PASS") == std::string::npos ||
        first.output.find("fail=0") == std::string::npos) {
        ok = false;
        why += " not-all-pass";
    }
    if (first.output != second.output) {
        ok = false;
        why += " reruns-differ";
    }
    const verify::TheoremReport rep = verify::verify_theorems(1, 100);
    if (rep.failed != 0 || rep.suites.size() != 7) {
        ok = false;
        why += " failed=" + std::to_string(rep.failed);
    }
    const double ms = ms_since(t0);
    if (ms > 60000.0) {
        ok = false;
        why += " runtime>60s";
    }
    report(3, ok,
           "theorem suites, seed 1, 100 instances each: orthogonality/mixture, "
           "orthogonality equivalence, observable and value eigenstate conditions, "
           "sharp-observable equivalence, vector components, reduced-state "
           "correlation - zero failures, reruns byte-identical (" +
               num(ms) + " ms)" + why);
}

// --- criterion 4: reduced-state correlation on random vector schemes --------
void criterion_4() {
    rng::Stream st(20260819);
    bool ok = true;
    std::string why;
    double worst_rho = 0.0, worst_spec = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Index ds = 2 + static_cast<Index>(st.next() % 3);
        const Index da = 2 + static_cast<Index>(st.next() % 3);
        const scheme::MeasurementScheme s(
            scheme::Coupling::unitary(rng::haar_unitary(ds * da, st), ds, da),
            rng::random_vector_state(da, st), quantum::basis_povm(da));
        const quantum::State input = rng::random_vector_state(ds, st);
        const auto rep = correlate::reduced_state_correlation(s, input);
        if (!rep.stats.defined) {
            ok = false;
            why += " undefined@" + std::to_string(k);
            continue;
        }
        worst_rho = std::max(worst_rho, std::abs(rep.stats.rho - 1.0));
        // Spectra agree on the common support, descending; the longer tail
        // is zero.
        const auto& so = rep.object_spectrum;
        const auto& sa = rep.apparatus_spectrum;
        const Index no = so.size(), na = sa.size(), m = std::min(no, na);
        for (Index i = 0; i < m; ++i)
            worst_spec = std::max(worst_spec,
                                  std::abs(so(no - 1 - i) - sa(na - 1 - i)));
        for (Index i = m; i < std::max(no, na); ++i) {
            const double extra = no > na ? so(no - 1 - i) : sa(na - 1 - i);
            worst_spec = std::max(worst_spec, std::abs(extra));
        }
    }
    if (worst_rho > 1e-8) {
        ok = false;
        why += " worst|rho-1|=" + num(worst_rho);
    }
    if (worst_spec > 1e-10) {
        ok = false;
        why += " worst-spectrum-gap=" + num(worst_spec);
    }
    report(4, ok,
           "50 random unitary vector schemes: reduced-state correlation 1 within "
           "1e-8 (worst " +
               num(worst_rho) + "), reduced spectra shared within 1e-10 (worst " +
               num(worst_spec) + ")" + why);
}

// --- criterion 5: three-level register shift fixture ------------------------
void criterion_5() {
    const auto sc = scenario::builtin("shift3");
    const auto& s = sc.scheme;
    const auto& r = sc.scale;
    bool ok = true;
    std::string why;

    const auto povm = s.measured_povm(r);
    for (int i = 0; i < 3; ++i) {
        CMatrix p = CMatrix::Zero(3, 3);
        p(i, i) = 1.0;
        if (max_abs_diff(povm.at(i).matrix, p) > 1e-10) {
            ok = false;
            why += " effect[" + std::to_string(i) + "]";
        }
    }

    // The state transformer is the projective conditioning map.
    const transformer::StateTransformer tr(s, r);
    double worst_luders = 0.0;
    for (const auto& t : transformer::test_state_set(3, 10)) {
        for (int i = 0; i < 3; ++i) {
            const CMatrix got = tr.apply(i, t);
            const CMatrix want =
                povm.at(i).matrix * t.matrix() * povm.at(i).matrix;
            worst_luders = std::max(worst_luders, max_abs_diff(got, want));
        }
    }
    if (worst_luders > 1e-10) {
        ok = false;
        why += " transformer-not-projective=" + num(worst_luders);
    }

    const auto obs = correlate::observable_correlation(s, sc.input, r);
    if (!obs.defined || std::abs(obs.rho - 1.0) > 1e-10) {
        ok = false;
        why += " rho_obs=" + num(obs.rho);
    }
    for (int i = 0; i < 3; ++i) {
        const auto v = correlate::value_correlation(s, sc.input, r, i);
        const auto stc = correlate::state_correlation(s, sc.input, r, i);
        if (!v.defined || std::abs(v.rho - 1.0) > 1e-10) {
            ok = false;
            why += " rho_value[" + std::to_string(i) + "]";
        }
        if (!stc.defined || std::abs(stc.rho - 1.0) > 1e-10) {
            ok = false;
            why += " rho_state[" + std::to_string(i) + "]";
        }
    }
    report(5, ok,
           "register-shift fixture: measured observable equals the generator's "
           "spectral projections within 1e-10, transformer is the projective "
           "conditioning, all correlations 1 within 1e-10" +
               why);
}

// --- criterion 6: quadrature model variance decomposition and trends --------
void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> lambdas{0.5, 1.0, 2.0, 4.0};
    const auto rows64 = models::quadrature_correlation_sweep(
        64, models::vacuum_state(64),
        quantum::State::vector_state(models::coherent_state(64, 1.0)), lambdas, 2);
    const auto rows32 = models::quadrature_correlation_sweep(
        32, models::vacuum_state(32),
        quantum::State::vector_state(models::coherent_state(32, 1.0)), lambdas, 2);

    bool ok = true;
    std::string why;
    for (size_t i = 0; i < lambdas.size(); ++i) {
        const auto& row = rows64[i];
        const std::string l = "lambda=" + num(row.lambda);
        const double var_pred = row.var_aq + row.var_bp_scaled;
        if (std::abs(row.var_e - var_pred) / var_pred > 0.05) {
            ok = false;
            why += " " + l + " Var(E)=" + num(row.var_e) + " vs decomposition " +
                   num(var_pred);
        }
        const double rho_pred =
            row.lambda * row.lambda / (row.lambda * row.lambda + 1.0);
        if (std::abs(row.rho_obs - rho_pred) / rho_pred > 0.05) {
            ok = false;
            why += " " + l + " rho_obs=" + num(row.rho_obs) + " vs " + num(rho_pred);
        }
        if (row.rho_obs >= 1.0) {
            ok = false;
            why += " " + l + " rho_obs>=1";
        }
        if (std::abs(row.rho_value_cell0 - 1.0) > 1e-3) {
            ok = false;
            why += " " + l + " rho_value=" + num(row.rho_value_cell0);
        }
        if (i > 0 && rows64[i].rho_obs <= rows64[i - 1].rho_obs) {
            ok = false;
            why += " monotonicity broken " + num(rows64[i - 1].rho_obs) + "->" +
                   num(rows64[i].rho_obs);
        }
        const double conv =
            std::abs(rows64[i].var_e - rows32[i].var_e) / rows64[i].var_e;
        if (conv > 0.01) {
            ok = false;
            why += " " + l + " N=32->64 Var(E) moves " + num(100.0 * conv) + "%";
        }
    }
    const double ms = ms_since(t0);
    if (ms > 120000.0) {
        ok = false;
        why += " runtime>120s";
    }
    report(6, ok,
           "quadrature model, N=64, vacuum probe, unit coherent signal, lambda in "
           "{0.5,1,2,4}: variance decomposition within 5%, rho_obs within 5% of "
           "lambda^2/(lambda^2+1) and strictly below 1, strictly increasing, "
           "binned value correlation 1 within 1e-3, N=32->64 variance drift < 1% (" +
               num(ms) + " ms)" + why);
}

// --- criterion 7: correlation/dependence algebra on constructed tables ------
void criterion_7() {
    using correlate::BivariateDist;
    using correlate::Dependence;
    bool ok = true;
    std::string why;
    auto vals = [](std::initializer_list<double> v) {
        RVector out(static_cast<Index>(v.size()));
        Index i = 0;
        for (double x : v) out(i++) = x;
        return out;
    };

    // rho = +1: diagonal table, affine increasing link.
    {
        RMatrix t = RMatrix::Zero(2, 2);
        t(0, 0) = 0.3;
        t(1, 1) = 0.7;
        const BivariateDist d(vals({0.0, 1.0}), vals({0.0, 1.0}), t);
        const auto st = correlate::audited_correlation(d);
        const auto dep = correlate::classify_dependence(d);
        if (!st.defined || std::abs(st.rho - 1.0) > 1e-10 ||
            dep.kind != Dependence::CompletelyDependent || !dep.link ||
            dep.link->slope <= 0.0) {
            ok = false;
            why += " diag-table";
        }
    }
    // rho = -1: antidiagonal table, affine decreasing link.
    {
        RMatrix t = RMatrix::Zero(2, 2);
        t(0, 1) = 0.4;
        t(1, 0) = 0.6;
        const BivariateDist d(vals({0.0, 1.0}), vals({0.0, 1.0}), t);
        const auto st = correlate::audited_correlation(d);
        const auto dep = correlate::classify_dependence(d);
        if (!st.defined || std::abs(st.rho + 1.0) > 1e-10 ||
            dep.kind != Dependence::CompletelyDependent || !dep.link ||
            dep.link->slope >= 0.0) {
            ok = false;
            why += " antidiag-table";
        }
    }
    // |rho| < 1 cases: a factorizing table and a partially dependent one.
    {
        RMatrix t(2, 2);
        t << 0.24, 0.36, 0.16, 0.24;
        const BivariateDist d(vals({0.0, 1.0}), vals({0.0, 1.0}), t);
        const auto st = correlate::audited_correlation(d);
        const auto dep = correlate::classify_dependence(d);
        if (!st.defined || std::abs(st.rho) > 1e-10 ||
            dep.kind != Dependence::Independent) {
            ok = false;
            why += " product-table";
        }
    }
    {
        RMatrix t(2, 2);
        t << 0.4, 0.1, 0.1, 0.4;
        const BivariateDist d(vals({0.0, 1.0}), vals({0.0, 1.0}), t);
        const auto st = correlate::audited_correlation(d);
        const auto dep = correlate::classify_dependence(d);
        if (!st.defined || std::abs(st.rho - 0.6) > 1e-10 ||
            dep.kind != Dependence::Dependent) {
            ok = false;
            why += " partial-table";
        }
    }
    // Uncorrelated but deterministically dependent: row = column^2 with a
    // symmetric column margin. rho = 0 while the table is completely
    // dependent; the link is not affine, so the extremal audit is untouched.
    {
        RMatrix t = RMatrix::Zero(2, 3);
        t(1, 0) = 1.0 / 3.0; // (-1)^2 = 1
        t(0, 1) = 1.0 / 3.0; //   0^2 = 0
        t(1, 2) = 1.0 / 3.0; //   1^2 = 1
        const BivariateDist d(vals({0.0, 1.0}), vals({-1.0, 0.0, 1.0}), t);
        const auto st = correlate::audited_correlation(d);
        const auto dep = correlate::classify_dependence(d);
        if (!st.defined || std::abs(st.rho) > 1e-10 ||
            dep.kind != Dependence::CompletelyDependent || dep.link.has_value()) {
            ok = false;
            why += " square-map-table rho=" + num(st.rho);
        }
    }
    report(7, ok,
           "dependence algebra: extremal correlation coincides with complete "
           "affine dependence of matching slope sign (1e-10), and a square-map "
           "table is uncorrelated yet completely dependent" +
               why);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-qmcli>\n");
        return 2;
    }
    const std::string cli = argv[1];

    criterion_8(cli);
    criterion_1();
    criterion_2(cli);
    criterion_3(cli);
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();

    std::printf("acceptance total=%d failed=%d\n", 8, g_failures);
    return g_failures == 0 ? 0 : 1;
}

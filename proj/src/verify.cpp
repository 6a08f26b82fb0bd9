#include "qmlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qmlab/correlate.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/linop.hpp"
#include "qmlab/models.hpp"
#include "qmlab/quantum.hpp"
#include "qmlab/random.hpp"
#include "qmlab/report.hpp"
#include "qmlab/scheme.hpp"

namespace qmlab::verify {
namespace {

using quantum::State;
using scheme::MeasurementScheme;
using scheme::ReadingCell;
using scheme::ReadingScale;

constexpr double kTauPremise = 1e-8;      // premise residual that qualifies
constexpr double kTauConclusion = 1e-6;   // conclusions must hold this tightly
constexpr double kClearViolation = 1e-3;  // negatives must break premises by this
constexpr double kExactBand = 1e-10;      // a conclusion this tight counts as exact
constexpr double kProbBand = 1e-3;        // the "0 != p != 1" guard band

CMatrix cyclic_shift(Index d) {
    CMatrix s = CMatrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) s((k + 1) % d, k) = 1.0;
    return s;
}

/// U = sum_k P[w_k] (x) S^k: measures the basis w sharply while the pointer
/// register walks by k. Premises of the positive classes hold exactly here.
CMatrix luders_unitary(const CMatrix& w) {
    const Index d = w.rows();
    const CMatrix s = cyclic_shift(d);
    CMatrix u = CMatrix::Zero(d * d, d * d);
    CMatrix sk = linop::identity(d);
    for (Index k = 0; k < d; ++k) {
        u += linop::kron(w.col(k) * w.col(k).adjoint(), sk);
        sk = s * sk;
    }
    return u;
}

CVector basis_vector(Index d, Index k) {
    CVector v = CVector::Zero(d);
    v(k) = 1.0;
    return v;
}

struct Instance {
    MeasurementScheme s;
    ReadingScale r;
    State t;
};

/// Two cells [0, split) and [split, d) over a d-outcome pointer.
ReadingScale coarse_scale(Index d, Index split) {
    std::vector<ReadingCell> cells(2);
    for (Index k = 0; k < d; ++k)
        cells[static_cast<size_t>(k < split ? 0 : 1)].pointer_indices.push_back(
            static_cast<int>(k));
    cells[0].value = 0.0;
    cells[1].value = 1.0;
    return ReadingScale(std::move(cells), static_cast<int>(d));
}

Instance make_luders(rng::Stream& st, Index d, bool vector_t, bool coarse) {
    const CMatrix w = rng::haar_unitary(d, st);
    MeasurementScheme s(scheme::Coupling::unitary(luders_unitary(w), d, d),
                        State::vector_state(basis_vector(d, 0)),
                        quantum::basis_povm(d));
    ReadingScale r = coarse
                         ? coarse_scale(d, 1 + static_cast<Index>(st.next() %
                                                                  static_cast<std::uint64_t>(d - 1)))
                         : s.default_scale();
    State t = vector_t ? rng::random_vector_state(d, st) : rng::random_state(d, st);
    return {std::move(s), std::move(r), std::move(t)};
}

/// A measurement of the same sharp observable whose conditioning is spoiled
/// by an extra object rotation after the coupling: the measured effects are
/// unchanged but the conditioned object states leave their eigenspaces.
Instance make_rotated_luders(rng::Stream& st, Index d) {
    const CMatrix w = rng::haar_unitary(d, st);
    const CMatrix rot = rng::haar_unitary(d, st);
    const CMatrix u = linop::kron(rot, linop::identity(d)) * luders_unitary(w);
    MeasurementScheme s(scheme::Coupling::unitary(u, d, d),
                        State::vector_state(basis_vector(d, 0)),
                        quantum::basis_povm(d));
    ReadingScale r = s.default_scale();
    State t = rng::random_state(d, st);
    return {std::move(s), std::move(r), std::move(t)};
}

/// Conditional unitary P0 (x) I + P1 (x) W on a vector apparatus: a genuinely
/// unsharp measurement whose object components overlap.
Instance make_conditional_kick(rng::Stream& st, Index da) {
    const CMatrix p0 = basis_vector(2, 0) * basis_vector(2, 0).adjoint();
    const CMatrix p1 = basis_vector(2, 1) * basis_vector(2, 1).adjoint();
    const CMatrix u = linop::kron(p0, linop::identity(da)) +
                      linop::kron(p1, rng::haar_unitary(da, st));
    MeasurementScheme s(scheme::Coupling::unitary(u, 2, da),
                        rng::random_vector_state(da, st), quantum::basis_povm(da));
    ReadingScale r = s.default_scale();
    State t = rng::random_vector_state(2, st);
    return {std::move(s), std::move(r), std::move(t)};
}

Instance make_haar_scheme(rng::Stream& st, Index ds, Index da) {
    MeasurementScheme s(
        scheme::Coupling::unitary(rng::haar_unitary(ds * da, st), ds, da),
        rng::random_vector_state(da, st), quantum::basis_povm(da));
    ReadingScale r = s.default_scale();
    State t = rng::random_vector_state(ds, st);
    return {std::move(s), std::move(r), std::move(t)};
}

double orthogonality_residual(const Instance& in) {
    return in.s.check_component_orthogonality(in.t, in.r).worst_off_diagonal;
}

double mixture_residual(const Instance& in) {
    return in.s.check_pointer_mixture(in.t, in.r).residual;
}

/// Worst pointer eigenstate defect over cells with weight inside (lo, hi).
double pvd_residual(const Instance& in, double lo, double hi) {
    const auto rep = in.s.check_pointer_value_definiteness(in.t, in.r);
    double worst = 0.0;
    for (const auto& c : rep.cells)
        if (c.weight > lo && c.weight < hi)
            worst = std::max(worst, c.eigen_defect);
    return worst;
}

/// Worst ||E_i T_S(i) - T_S(i)|| over weighted cells.
double eigenstate_residual(const Instance& in, const quantum::Povm& povm) {
    double worst = 0.0;
    const auto comps = in.s.all_components(in.t, in.r);
    for (size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].weight <= 1e-9 || !comps[i].object) continue;
        const CMatrix& ts = comps[i].object->matrix();
        worst = std::max(
            worst, linop::frob(povm.at(static_cast<int>(i)).matrix * ts - ts));
    }
    return worst;
}

/// Worst |rho_value - 1| over cells in the probability band; counts them.
double value_correlation_worst(const Instance& in, int* n_defined) {
    double worst = 0.0;
    int n = 0;
    for (int i = 0; i < in.r.size(); ++i) {
        const auto vc = correlate::value_correlation(in.s, in.t, in.r, i, kProbBand);
        if (!vc.defined) continue;
        ++n;
        worst = std::max(worst, std::abs(vc.rho - 1.0));
    }
    if (n_defined) *n_defined = n;
    return worst;
}

/// Worst |rho_state - 1| over cells in the band, and the worst component
/// impurity met along the way (vector-state hypothesis check).
double state_correlation_worst(const Instance& in, int* n_defined,
                               double* impurity) {
    double worst = 0.0;
    double imp = 0.0;
    int n = 0;
    const auto comps = in.s.all_components(in.t, in.r);
    for (size_t i = 0; i < comps.size(); ++i) {
        const double p = comps[i].weight;
        if (p <= kProbBand || p >= 1.0 - kProbBand) continue;
        if (comps[i].object) {
            const CMatrix& x = comps[i].object->matrix();
            imp = std::max(imp, std::abs(1.0 - (x * x).trace().real()));
        }
        if (comps[i].apparatus) {
            const CMatrix& x = comps[i].apparatus->matrix();
            imp = std::max(imp, std::abs(1.0 - (x * x).trace().real()));
        }
        const auto sc =
            correlate::state_correlation(in.s, in.t, in.r, static_cast<int>(i));
        if (!sc.defined) continue;
        ++n;
        worst = std::max(worst, std::abs(sc.rho - 1.0));
    }
    if (n_defined) *n_defined = n;
    if (impurity) *impurity = imp;
    return worst;
}

/// Positive instance: premise built to hold; conclusion must follow.
void finish_positive(TheoremInstance& ti) {
    if (ti.premise_residual > kTauPremise) {
        ti.outcome = Outcome::Inconclusive;
        ti.note = "hypothesis-class-defect";
        return;
    }
    ti.premise_holds = true;
    ti.outcome =
        ti.conclusion_residual <= kTauConclusion ? Outcome::Pass : Outcome::Fail;
}

/// Contrapositive witness of an equivalence: the premise must fail grossly
/// and the conclusion must fail measurably; a conclusion that still holds
/// exactly refutes the biconditional.
void finish_negative(TheoremInstance& ti) {
    if (ti.premise_residual < kClearViolation) {
        ti.outcome = Outcome::Inconclusive;
        ti.note = "premise-not-clearly-violated";
        return;
    }
    if (ti.conclusion_residual >= kTauConclusion) {
        ti.outcome = Outcome::Pass;
    } else if (ti.conclusion_residual <= kExactBand) {
        ti.outcome = Outcome::Fail;
        ti.note = "conclusion-held-despite-violated-premise";
    } else {
        ti.outcome = Outcome::Inconclusive;
        ti.note = "gray-zone";
    }
}

void run_orthogonality_mixture(rng::Stream& st, int count, bool,
                               std::vector<TheoremInstance>& out) {
    static const char* kClasses[] = {"luders-fine-mixed", "luders-coarse-mixed",
                                     "luders-fine-vector"};
    for (int i = 0; i < count; ++i) {
        const int c = i % 3;
        const Index d = (c == 1)
                            ? 3 + static_cast<Index>(st.next() % 3)
                            : 2 + static_cast<Index>(st.next() % 4);
        const Instance in = make_luders(st, d, c == 2, c == 1);
        TheoremInstance ti;
        ti.index = i;
        ti.cls = kClasses[c];
        ti.premise_residual = orthogonality_residual(in);
        ti.conclusion_residual =
            std::max(mixture_residual(in), pvd_residual(in, 1e-9, 2.0));
        finish_positive(ti);
        out.push_back(std::move(ti));
    }
}

void run_orthogonality_equivalence(rng::Stream& st, int count, bool,
                                   std::vector<TheoremInstance>& out) {
    for (int i = 0; i < count; ++i) {
        TheoremInstance ti;
        ti.index = i;
        if (i == 0) {
            // fixed witness: the pi/2 conditional rotation on a plus input has
            // overlapping components and a broken pointer mixture, consistently
            auto s = models::build_controlled_rotation(std::numbers::pi / 2);
            ReadingScale r = s.default_scale();
            CVector plus(2);
            plus << 1.0, 1.0;
            const Instance in{std::move(s), std::move(r),
                              State::vector_state(plus.normalized())};
            ti.cls = "conditional-rotation-witness";
            ti.premise_residual = orthogonality_residual(in);
            ti.conclusion_residual = mixture_residual(in);
            finish_negative(ti);
        } else if (i % 2 == 0) {
            const bool coarse = (i % 4) == 0;
            const Index d = coarse ? 3 + static_cast<Index>(st.next() % 3)
                                   : 2 + static_cast<Index>(st.next() % 4);
            const Instance in = make_luders(st, d, true, coarse);
            ti.cls = coarse ? "luders-coarse-vector" : "luders-fine-vector";
            ti.premise_residual = orthogonality_residual(in);
            ti.conclusion_residual = mixture_residual(in);
            finish_positive(ti);
        } else {
            const Index da = 2 + static_cast<Index>(st.next() % 2);
            const Instance in = make_conditional_kick(st, da);
            ti.cls = "conditional-kick";
            ti.premise_residual = orthogonality_residual(in);
            ti.conclusion_residual = mixture_residual(in);
            finish_negative(ti);
        }
        out.push_back(std::move(ti));
    }
}

void run_observable_eigenstate(rng::Stream& st, int count, bool bug,
                               std::vector<TheoremInstance>& out) {
    static const char* kClasses[] = {"luders-fine-mixed", "luders-coarse-mixed",
                                     "rotated-luders"};
    for (int i = 0; i < count; ++i) {
        const int c = i % 3;
        const Index d = (c == 1)
                            ? 3 + static_cast<Index>(st.next() % 3)
                            : 2 + static_cast<Index>(st.next() % 4);
        const Instance in = (c == 2) ? make_rotated_luders(st, d)
                                     : make_luders(st, d, false, c == 1);
        TheoremInstance ti;
        ti.index = i;
        ti.cls = kClasses[c];
        const auto povm = in.s.measured_povm(in.r);
        ti.premise_residual = eigenstate_residual(in, povm);
        const auto stats = correlate::observable_correlation(in.s, in.t, in.r);
        if (c < 2) {
            if (!stats.defined) {
                ti.outcome = Outcome::Inconclusive;
                ti.note = "degenerate-marginal";
                out.push_back(std::move(ti));
                continue;
            }
            const double rho = bug ? -stats.rho : stats.rho;
            ti.conclusion_residual = std::abs(rho - 1.0);
            if (bug) ti.note = "sign-flip-hook";
            finish_positive(ti);
        } else {
            // the per-state converse needs every cell probability away from
            // 0 and 1; random mixed states land there almost surely
            bool in_band = true;
            for (int j = 0; j < povm.size(); ++j) {
                const double p = quantum::prob(in.t, povm.at(j));
                if (p <= kProbBand || p >= 1.0 - kProbBand) in_band = false;
            }
            if (!in_band) {
                ti.outcome = Outcome::Inconclusive;
                ti.note = "outside-probability-band";
            } else {
                ti.conclusion_residual = stats.defined ? std::abs(stats.rho - 1.0) : 1.0;
                finish_negative(ti);
            }
        }
        out.push_back(std::move(ti));
    }
}

void run_value_eigenstate(rng::Stream& st, int count, bool,
                          std::vector<TheoremInstance>& out) {
    static const char* kClasses[] = {"luders-fine-mixed", "luders-coarse-mixed",
                                     "luders-fine-vector"};
    for (int i = 0; i < count; ++i) {
        const int c = i % 3;
        const Index d = (c == 1)
                            ? 3 + static_cast<Index>(st.next() % 3)
                            : 2 + static_cast<Index>(st.next() % 4);
        const Instance in = make_luders(st, d, c == 2, c == 1);
        TheoremInstance ti;
        ti.index = i;
        ti.cls = kClasses[c];
        const auto povm = in.s.measured_povm(in.r);
        ti.premise_residual = eigenstate_residual(in, povm);
        int defined = 0;
        const double worst = value_correlation_worst(in, &defined);
        if (defined == 0) {
            ti.outcome = Outcome::Inconclusive;
            ti.note = "no-cell-in-band";
        } else {
            ti.conclusion_residual = std::max(worst, pvd_residual(in, 1e-9, 2.0));
            finish_positive(ti);
        }
        out.push_back(std::move(ti));
    }
}

void run_sharp_equivalence(rng::Stream& st, int count, bool,
                           std::vector<TheoremInstance>& out) {
    for (int i = 0; i < count; ++i) {
        TheoremInstance ti;
        ti.index = i;
        const bool negative = (i % 2) == 1;
        const bool coarse = !negative && (i % 4) == 2;
        const Index d = coarse ? 3 + static_cast<Index>(st.next() % 3)
                               : 2 + static_cast<Index>(st.next() % 4);
        const Instance in = negative ? make_rotated_luders(st, d)
                                     : make_luders(st, d, false, coarse);
        ti.cls = negative ? "rotated-luders"
                          : (coarse ? "luders-coarse-mixed" : "luders-fine-mixed");
        const auto povm = in.s.measured_povm(in.r);
        if (!quantum::is_sharp(povm).sharp) {
            ti.outcome = Outcome::Inconclusive;
            ti.note = "observable-not-sharp";
            out.push_back(std::move(ti));
            continue;
        }
        ti.premise_residual = eigenstate_residual(in, povm);
        int defined = 0;
        const double worst = value_correlation_worst(in, &defined);
        if (defined == 0) {
            ti.outcome = Outcome::Inconclusive;
            ti.note = "no-cell-in-band";
            out.push_back(std::move(ti));
            continue;
        }
        ti.conclusion_residual = std::max(worst, pvd_residual(in, 1e-9, 2.0));
        if (negative)
            finish_negative(ti);
        else
            finish_positive(ti);
        out.push_back(std::move(ti));
    }
}

void run_vector_components(rng::Stream& st, int count, bool,
                           std::vector<TheoremInstance>& out) {
    for (int i = 0; i < count; ++i) {
        TheoremInstance ti;
        ti.index = i;
        const bool negative = (i % 2) == 1;
        const Index d = 2 + static_cast<Index>(st.next() % 3);
        const Instance in =
            negative ? make_conditional_kick(st, d) : make_luders(st, d, true, false);
        ti.cls = negative ? "conditional-kick" : "luders-fine-vector";
        ti.premise_residual = orthogonality_residual(in);
        int defined = 0;
        double impurity = 0.0;
        const double worst = state_correlation_worst(in, &defined, &impurity);
        if (impurity > 1e-8) {
            ti.outcome = Outcome::Inconclusive;
            ti.note = "nonvector-components";
            out.push_back(std::move(ti));
            continue;
        }
        if (defined == 0) {
            ti.outcome = Outcome::Inconclusive;
            ti.note = "no-cell-in-band";
            out.push_back(std::move(ti));
            continue;
        }
        ti.conclusion_residual =
            std::max(worst, pvd_residual(in, kProbBand, 1.0 - kProbBand));
        if (negative)
            finish_negative(ti);
        else
            finish_positive(ti);
        out.push_back(std::move(ti));
    }
}

void run_reduced_state(rng::Stream& st, int count, bool,
                       std::vector<TheoremInstance>& out) {
    for (int i = 0; i < count; ++i) {
        const Index ds = 2 + static_cast<Index>(st.next() % 3);
        const Index da = 2 + static_cast<Index>(st.next() % 3);
        const Instance in = make_haar_scheme(st, ds, da);
        TheoremInstance ti;
        ti.index = i;
        ti.cls = "haar-unitary-vector";
        ti.premise_holds = true;  // structural: unitary coupling, vector inputs
        const auto rr = correlate::reduced_state_correlation(in.s, in.t);
        if (!rr.stats.defined) {
            ti.outcome = Outcome::Inconclusive;
            ti.note = "degenerate-spectrum";
            out.push_back(std::move(ti));
            continue;
        }
        // spectra are ascending and agree on the common support; the longer
        // side may carry extra zeros at its bottom
        const Index na = rr.object_spectrum.size();
        const Index nb = rr.apparatus_spectrum.size();
        const Index common = std::min(na, nb);
        double spec_diff = 0.0;
        for (Index k = 0; k < common; ++k)
            spec_diff = std::max(spec_diff,
                                 std::abs(rr.object_spectrum(na - 1 - k) -
                                          rr.apparatus_spectrum(nb - 1 - k)));
        for (Index k = common; k < na; ++k)
            spec_diff = std::max(spec_diff, std::abs(rr.object_spectrum(na - 1 - k)));
        for (Index k = common; k < nb; ++k)
            spec_diff =
                std::max(spec_diff, std::abs(rr.apparatus_spectrum(nb - 1 - k)));
        ti.conclusion_residual = std::max(std::abs(rr.stats.rho - 1.0), spec_diff);
        ti.outcome = ti.conclusion_residual <= kTauConclusion ? Outcome::Pass
                                                              : Outcome::Fail;
        out.push_back(std::move(ti));
    }
}

using RunFn = void (*)(rng::Stream&, int, bool, std::vector<TheoremInstance>&);

SuiteReport run_suite(const char* name, std::uint64_t seed, std::uint64_t ordinal,
                      int count, bool bug, RunFn fn) {
    SuiteReport rep;
    rep.name = name;
    rep.requested = count;
    rng::Stream st(seed ^ (0x9E3779B97F4A7C15ULL * (ordinal + 1)));
    fn(st, count, bug, rep.instances);
    for (auto& ti : rep.instances) {
        ti.suite = rep.name;
        switch (ti.outcome) {
            case Outcome::Pass: ++rep.passed; break;
            case Outcome::Fail: ++rep.failed; break;
            case Outcome::Inconclusive: ++rep.inconclusive; break;
            case Outcome::Skipped: ++rep.skipped; break;
        }
        if (ti.premise_holds) {
            rep.worst_premise = std::max(rep.worst_premise, ti.premise_residual);
            if (ti.outcome == Outcome::Pass)
                rep.worst_conclusion =
                    std::max(rep.worst_conclusion, ti.conclusion_residual);
        }
    }
    return rep;
}

} // namespace

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Inconclusive: return "inconclusive";
        case Outcome::Skipped: return "skip";
    }
    return "?";
}

TheoremReport verify_theorems(std::uint64_t seed, int count, bool inject_bug) {
    if (count <= 0) throw ValidationError("verify_theorems: count must be positive");
    TheoremReport rep;
    rep.seed = seed;
    rep.count = count;
    rep.bug_injected = inject_bug;

    struct Entry {
        const char* name;
        RunFn fn;
    };
    static const Entry kSuites[] = {
        {"orthogonality_mixture", run_orthogonality_mixture},
        {"orthogonality_equivalence", run_orthogonality_equivalence},
        {"observable_eigenstate", run_observable_eigenstate},
        {"value_eigenstate", run_value_eigenstate},
        {"sharp_equivalence", run_sharp_equivalence},
        {"vector_components", run_vector_components},
        {"reduced_state", run_reduced_state},
    };
    for (std::uint64_t k = 0; k < std::size(kSuites); ++k) {
        rep.suites.push_back(
            run_suite(kSuites[k].name, seed, k, count, inject_bug, kSuites[k].fn));
        const auto& s = rep.suites.back();
        rep.passed += s.passed;
        rep.failed += s.failed;
        rep.inconclusive += s.inconclusive;
        rep.skipped += s.skipped;
    }
    rep.all_ok = rep.failed == 0;
    return rep;
}

std::string render_report(const TheoremReport& rep) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "verify seed=%llu count=%d bug=%d\n",
                  static_cast<unsigned long long>(rep.seed), rep.count,
                  rep.bug_injected ? 1 : 0);
    out += line;
    for (const auto& s : rep.suites) {
        std::snprintf(line, sizeof(line),
                      "suite name=%s requested=%d pass=%d fail=%d inconclusive=%d "
                      "skip=%d worst_premise=%s worst_conclusion=%s\n",
                      s.name.c_str(), s.requested, s.passed, s.failed,
                      s.inconclusive, s.skipped, report::fmt(s.worst_premise).c_str(),
                      report::fmt(s.worst_conclusion).c_str());
        out += line;
    }
    for (const auto& s : rep.suites)
        for (const auto& ti : s.instances) {
            if (ti.outcome == Outcome::Pass) continue;
            std::snprintf(line, sizeof(line),
                          "nonpass suite=%s index=%d class=%s outcome=%s premise=%s "
                          "conclusion=%s note=%s\n",
                          ti.suite.c_str(), ti.index, ti.cls.c_str(),
                          to_string(ti.outcome),
                          report::fmt(ti.premise_residual).c_str(),
                          report::fmt(ti.conclusion_residual).c_str(),
                          ti.note.empty() ? "-" : ti.note.c_str());
            out += line;
        }
    std::snprintf(line, sizeof(line),
                  "total pass=%d fail=%d inconclusive=%d skip=%d\n", rep.passed,
                  rep.failed, rep.inconclusive, rep.skipped);
    out += line;
    out += rep.all_ok ? "result PASS\n" : "result FAIL\n";
    return out;
}

} // namespace qmlab::verify

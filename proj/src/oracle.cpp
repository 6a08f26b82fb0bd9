#include "qmlab/oracle.hpp"

#include "qmlab/correlate.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/report.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qmlab::oracle {

namespace {

using qmlab::CMatrix;
using qmlab::Complex;
using qmlab::Index;
using qmlab::RVector;

// Everything below recomputes the library quantities from first principles
// with explicit index loops; Eigen is used only as a matrix kernel
// (products, eigendecompositions) plus the Pade exponential, which is a
// different algorithm from the spectral route the coupling itself uses.

CMatrix bf_kron(const CMatrix& a, const CMatrix& b) {
    const Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    CMatrix out(ar * br, ac * bc);
    for (Index i = 0; i < ar; ++i)
        for (Index j = 0; j < ac; ++j)
            for (Index k = 0; k < br; ++k)
                for (Index l = 0; l < bc; ++l)
                    out(i * br + k, j * bc + l) = a(i, j) * b(k, l);
    return out;
}

// Trace over the apparatus factor: S(m,n) = sum_a F((m,a),(n,a)).
CMatrix bf_trace_apparatus(const CMatrix& f, Index ds, Index da) {
    CMatrix out = CMatrix::Zero(ds, ds);
    for (Index m = 0; m < ds; ++m)
        for (Index n = 0; n < ds; ++n)
            for (Index a = 0; a < da; ++a)
                out(m, n) += f(m * da + a, n * da + a);
    return out;
}

// Trace over the object factor: A(a,b) = sum_s F((s,a),(s,b)).
CMatrix bf_trace_object(const CMatrix& f, Index ds, Index da) {
    CMatrix out = CMatrix::Zero(da, da);
    for (Index a = 0; a < da; ++a)
        for (Index b = 0; b < da; ++b)
            for (Index s = 0; s < ds; ++s)
                out(a, b) += f(s * da + a, s * da + b);
    return out;
}

Complex bf_trace(const CMatrix& x) {
    Complex t = 0.0;
    for (Index i = 0; i < x.rows(); ++i) t += x(i, i);
    return t;
}

// tr[X Y] by explicit double sum.
Complex bf_trace_prod(const CMatrix& x, const CMatrix& y) {
    Complex t = 0.0;
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j)
            t += x(i, j) * y(j, i);
    return t;
}

double bf_frob(const CMatrix& x) {
    double s = 0.0;
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j)
            s += std::norm(x(i, j));
    return std::sqrt(s);
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return 1.0;
    double worst = 0.0;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

CMatrix psd_sqrt(const CMatrix& z) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(z);
    RVector lam = es.eigenvalues();
    for (Index i = 0; i < lam.size(); ++i) lam(i) = std::sqrt(std::max(lam(i), 0.0));
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<CMatrix> operation_list(const scheme::Coupling& c) {
    if (c.kind() == scheme::Coupling::Kind::Channel) return c.kraus();
    return {c.dense_unitary()};
}

CMatrix bf_evolve(const std::vector<CMatrix>& ops, const CMatrix& x) {
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (const CMatrix& k : ops) out += k * x * k.adjoint();
    return out;
}

CMatrix bf_heisenberg(const std::vector<CMatrix>& ops, const CMatrix& y) {
    CMatrix out = CMatrix::Zero(y.rows(), y.cols());
    for (const CMatrix& k : ops) out += k.adjoint() * y * k;
    return out;
}

struct BruteMoments {
    double eps1 = 0.0, eps2 = 0.0, eps12 = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0;
    double rho = 0.0;
    bool defined = false;
};

// Moments of two commuting-factor quantities X (x) I and I (x) Y in the
// final joint state, with an optional definedness band on eps2.
BruteMoments bf_quantity_moments(const CMatrix& f, const CMatrix& x, const CMatrix& y,
                                 Index ds, Index da, bool band, double band_tol) {
    const CMatrix id_s = CMatrix::Identity(ds, ds);
    const CMatrix id_a = CMatrix::Identity(da, da);
    BruteMoments m;
    m.eps1 = bf_trace_prod(f, bf_kron(x, id_a)).real();
    m.eps2 = bf_trace_prod(f, bf_kron(id_s, y)).real();
    m.eps12 = bf_trace_prod(f, bf_kron(x, y)).real();
    const double m1sq = bf_trace_prod(f, bf_kron(CMatrix(x * x), id_a)).real();
    const double m2sq = bf_trace_prod(f, bf_kron(id_s, CMatrix(y * y))).real();
    m.sigma1 = std::sqrt(std::max(m1sq - m.eps1 * m.eps1, 0.0));
    m.sigma2 = std::sqrt(std::max(m2sq - m.eps2 * m.eps2, 0.0));
    const bool in_band = !band || (m.eps2 > band_tol && m.eps2 < 1.0 - band_tol);
    if (in_band && m.sigma1 * m.sigma2 > 1e-12) {
        m.rho = (m.eps12 - m.eps1 * m.eps2) / (m.sigma1 * m.sigma2);
        m.defined = true;
    }
    return m;
}

// Compare squared deviations: near a vanishing variance the square root
// amplifies the ~1e-16 cancellation noise of either route to ~1e-8, while
// the variances themselves still agree to full precision.
double moment_gap(const correlate::CorrStats& a, const BruteMoments& b) {
    double worst = std::abs(a.eps1 - b.eps1);
    worst = std::max(worst, std::abs(a.eps2 - b.eps2));
    worst = std::max(worst, std::abs(a.eps12 - b.eps12));
    worst = std::max(worst, std::abs(a.sigma1 * a.sigma1 - b.sigma1 * b.sigma1));
    worst = std::max(worst, std::abs(a.sigma2 * a.sigma2 - b.sigma2 * b.sigma2));
    return worst;
}

// A variance computed as a difference of second moments carries cancellation
// noise around 1e-16, i.e. sigma noise around 1e-8. Correlations divide by
// sigma1*sigma2, so comparing them between two routes is meaningful only
// when both sit well above that floor; below it the moments carry the check.
constexpr double kRhoFloor = 1e-6;

// 0: skip the comparison, 1: compare rho values, -1: definedness conflict.
int rho_verdict(const correlate::CorrStats& a, const BruteMoments& b) {
    const double pa = a.sigma1 * a.sigma2;
    const double pb = b.sigma1 * b.sigma2;
    if (a.defined && b.defined) return std::min(pa, pb) > kRhoFloor ? 1 : 0;
    if (a.defined == b.defined) return 0;
    return std::max(pa, pb) > kRhoFloor ? -1 : 0;
}

std::string tag(const char* base, int i) {
    return std::string(base) + "[" + std::to_string(i) + "]";
}

} // namespace

OracleReport cross_check(const scenario::Scenario& sc, double tol) {
    const scheme::MeasurementScheme& s = sc.scheme;
    const Index ds = s.dim_object();
    const Index da = s.dim_apparatus();
    if (ds * da > 16)
        throw DimensionError("oracle: joint dimension above the brute-force bound of 16");

    OracleReport rep;
    rep.tol = tol;
    auto push = [&rep](std::string what, double d) {
        rep.entries.push_back({std::move(what), d});
        rep.max_discrepancy = std::max(rep.max_discrepancy, d);
    };

    // Coupling: for factored generators, rebuild the joint unitary through
    // the Pade exponential instead of the spectral form.
    if (s.coupling().kind() == scheme::Coupling::Kind::ProductUnitary) {
        const scheme::Coupling& c = s.coupling();
        const CMatrix a = c.object_eigenvectors() *
                          c.object_eigenvalues().asDiagonal() *
                          c.object_eigenvectors().adjoint();
        const CMatrix b = c.apparatus_eigenvectors() *
                          c.apparatus_eigenvalues().asDiagonal() *
                          c.apparatus_eigenvectors().adjoint();
        const CMatrix h = bf_kron(a, b);
        const CMatrix u_pade = (Complex(0.0, c.lambda()) * h).exp();
        push("coupling_exponential", max_abs_diff(c.dense_unitary(), u_pade));
    }

    const std::vector<CMatrix> ops = operation_list(s.coupling());

    // Final joint state from the raw product input, evolved entrywise.
    const CMatrix t_in = sc.input.matrix();
    const CMatrix ta_in = s.apparatus_state().matrix();
    CMatrix x0(ds * da, ds * da);
    for (Index m = 0; m < ds; ++m)
        for (Index n = 0; n < ds; ++n)
            for (Index a = 0; a < da; ++a)
                for (Index b = 0; b < da; ++b)
                    x0(m * da + a, n * da + b) = t_in(m, n) * ta_in(a, b);
    const CMatrix f = bf_evolve(ops, x0);

    const scheme::JointState joint = s.joint_final(sc.input);
    push("final_reduced_object", max_abs_diff(joint.reduced_object(),
                                              bf_trace_apparatus(f, ds, da)));
    push("final_reduced_apparatus", max_abs_diff(joint.reduced_apparatus(),
                                                 bf_trace_object(f, ds, da)));

    // Cell pointer effects and the measured observable, from the Heisenberg
    // picture contraction against the probe state.
    const scheme::ReadingScale& r = sc.scale;
    const int nc = r.size();
    const CMatrix id_s = CMatrix::Identity(ds, ds);
    std::vector<CMatrix> z_cell(static_cast<size_t>(nc));
    std::vector<CMatrix> e_cell(static_cast<size_t>(nc));
    for (int i = 0; i < nc; ++i) {
        CMatrix z = CMatrix::Zero(da, da);
        for (int j : r.cell(i).pointer_indices) z += s.pointer().at(j).matrix;
        z_cell[static_cast<size_t>(i)] = z;
        const CMatrix g = bf_heisenberg(ops, bf_kron(id_s, z));
        CMatrix e = CMatrix::Zero(ds, ds);
        for (Index m = 0; m < ds; ++m)
            for (Index n = 0; n < ds; ++n) {
                Complex acc = 0.0;
                for (Index a1 = 0; a1 < da; ++a1)
                    for (Index a2 = 0; a2 < da; ++a2)
                        acc += ta_in(a1, a2) * g(m * da + a2, n * da + a1);
                e(m, n) = acc;
            }
        e_cell[static_cast<size_t>(i)] = e;
    }

    const quantum::Povm povm = s.measured_povm(r);
    for (int i = 0; i < nc; ++i)
        push(tag("effect", i), max_abs_diff(povm.at(i).matrix, e_cell[static_cast<size_t>(i)]));

    // Conditioned components per cell, by direct conjugation with sqrt(Z_i).
    const auto comps = s.all_components(sc.input, r);
    std::vector<CMatrix> cond(static_cast<size_t>(nc));
    std::vector<double> w_bf(static_cast<size_t>(nc), 0.0);
    for (int i = 0; i < nc; ++i) {
        const CMatrix sq = bf_kron(id_s, psd_sqrt(z_cell[static_cast<size_t>(i)]));
        const CMatrix c = sq * f * sq;
        cond[static_cast<size_t>(i)] = c;
        const double w = bf_trace(c).real();
        w_bf[static_cast<size_t>(i)] = w;
        push(tag("weight", i), std::abs(comps[static_cast<size_t>(i)].weight - w));
        const bool brute_def = w > 1e-12;
        const bool main_def = comps[static_cast<size_t>(i)].object.has_value();
        if (brute_def && main_def) {
            push(tag("object_component", i),
                 max_abs_diff(comps[static_cast<size_t>(i)].object->matrix(),
                              CMatrix(bf_trace_apparatus(c, ds, da) / w)));
            push(tag("apparatus_component", i),
                 max_abs_diff(comps[static_cast<size_t>(i)].apparatus->matrix(),
                              CMatrix(bf_trace_object(c, ds, da) / w)));
        }
    }

    // Structural residuals, recomputed and compared against the library's.
    {
        CMatrix sum_s = CMatrix::Zero(ds, ds);
        CMatrix sum_a = CMatrix::Zero(da, da);
        for (int i = 0; i < nc; ++i) {
            sum_s += bf_trace_apparatus(cond[static_cast<size_t>(i)], ds, da);
            sum_a += bf_trace_object(cond[static_cast<size_t>(i)], ds, da);
        }
        const double add_bf = bf_frob(sum_s - bf_trace_apparatus(f, ds, da));
        const double mix_bf = bf_frob(sum_a - bf_trace_object(f, ds, da));
        push("additivity_residual",
             std::abs(s.check_object_additivity(sc.input, r).residual - add_bf));
        push("mixture_residual",
             std::abs(s.check_pointer_mixture(sc.input, r).residual - mix_bf));
    }

    // Pointer value definiteness per weighted cell.
    {
        const auto pvd = s.check_pointer_value_definiteness(sc.input, r);
        for (int i = 0; i < nc; ++i) {
            const double w = w_bf[static_cast<size_t>(i)];
            if (w <= 1e-9) continue;
            const CMatrix ta_i =
                CMatrix(bf_trace_object(cond[static_cast<size_t>(i)], ds, da) / w);
            const CMatrix& z = z_cell[static_cast<size_t>(i)];
            const double prob_bf = std::abs(bf_trace_prod(ta_i, z).real() - 1.0);
            const double eig_bf = bf_frob(z * ta_i - ta_i);
            const auto it = std::find_if(pvd.cells.begin(), pvd.cells.end(),
                                         [i](const auto& c) { return c.cell == i; });
            if (it == pvd.cells.end()) {
                push(tag("pvd_missing", i), 1.0);
                continue;
            }
            push(tag("pvd_prob", i), std::abs(it->prob_defect - prob_bf));
            push(tag("pvd_eigen", i), std::abs(it->eigen_defect - eig_bf));
        }
    }

    // Joint reading table of the measured observable against the pointer:
    // mu(i,j) = tr[F (E_i (x) Z_j)], then the induced correlation.
    {
        const correlate::BivariateDist d = correlate::observable_bivariate(s, sc.input, r);
        RMatrix mu(nc, nc);
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j)
                mu(i, j) = bf_trace_prod(f, bf_kron(e_cell[static_cast<size_t>(i)],
                                                    z_cell[static_cast<size_t>(j)]))
                               .real();
        double table_gap = 0.0;
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j)
                table_gap = std::max(table_gap, std::abs(d.table()(i, j) - mu(i, j)));
        push("observable_table", table_gap);

        const RVector v = r.values();
        BruteMoments bm;
        double m1sq = 0.0, m2sq = 0.0;
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j) {
                bm.eps1 += v(i) * mu(i, j);
                bm.eps2 += v(j) * mu(i, j);
                bm.eps12 += v(i) * v(j) * mu(i, j);
                m1sq += v(i) * v(i) * mu(i, j);
                m2sq += v(j) * v(j) * mu(i, j);
            }
        bm.sigma1 = std::sqrt(std::max(m1sq - bm.eps1 * bm.eps1, 0.0));
        bm.sigma2 = std::sqrt(std::max(m2sq - bm.eps2 * bm.eps2, 0.0));
        if (bm.sigma1 * bm.sigma2 > 1e-12) {
            bm.rho = (bm.eps12 - bm.eps1 * bm.eps2) / (bm.sigma1 * bm.sigma2);
            bm.defined = true;
        }
        const correlate::CorrStats st = correlate::observable_correlation(s, sc.input, r);
        push("observable_moments", moment_gap(st, bm));
        const int verdict = rho_verdict(st, bm);
        if (verdict < 0)
            push("observable_rho", 1.0);
        else if (verdict > 0)
            push("observable_rho", std::abs(st.rho - bm.rho));
    }

    // Per-cell value and component-state correlations.
    for (int i = 0; i < nc; ++i) {
        const correlate::CorrStats vst = correlate::value_correlation(s, sc.input, r, i);
        const BruteMoments vbm = bf_quantity_moments(
            f, e_cell[static_cast<size_t>(i)], z_cell[static_cast<size_t>(i)], ds, da,
            /*band=*/true, 1e-10);
        push(tag("value_moments", i), moment_gap(vst, vbm));
        const int v_verdict = rho_verdict(vst, vbm);
        if (v_verdict < 0)
            push(tag("value_rho", i), 1.0);
        else if (v_verdict > 0)
            push(tag("value_rho", i), std::abs(vst.rho - vbm.rho));

        const correlate::CorrStats sst = correlate::state_correlation(s, sc.input, r, i);
        if (w_bf[static_cast<size_t>(i)] > 1e-10) {
            const double w = w_bf[static_cast<size_t>(i)];
            const CMatrix ts_i =
                CMatrix(bf_trace_apparatus(cond[static_cast<size_t>(i)], ds, da) / w);
            const CMatrix ta_i =
                CMatrix(bf_trace_object(cond[static_cast<size_t>(i)], ds, da) / w);
            const BruteMoments sbm =
                bf_quantity_moments(f, ts_i, ta_i, ds, da, /*band=*/false, 0.0);
            push(tag("state_moments", i), moment_gap(sst, sbm));
            const int s_verdict = rho_verdict(sst, sbm);
            if (s_verdict < 0)
                push(tag("state_rho", i), 1.0);
            else if (s_verdict > 0)
                push(tag("state_rho", i), std::abs(sst.rho - sbm.rho));
        }
    }

    // Reduced final states as quantities: correlation and shared spectrum.
    try {
        const correlate::ReducedStateReport rr = correlate::reduced_state_correlation(s, sc.input);
        const CMatrix rs = bf_trace_apparatus(f, ds, da);
        const CMatrix ra = bf_trace_object(f, ds, da);
        const BruteMoments rbm = bf_quantity_moments(f, rs, ra, ds, da, /*band=*/false, 0.0);
        push("reduced_state_moments", moment_gap(rr.stats, rbm));
        const int verdict = rho_verdict(rr.stats, rbm);
        if (verdict < 0)
            push("reduced_state_rho", 1.0);
        else if (verdict > 0)
            push("reduced_state_rho", std::abs(rr.stats.rho - rbm.rho));
        else if (!rr.stats.defined && !rbm.defined)
            push("reduced_state_undefined", 0.0);

        Eigen::SelfAdjointEigenSolver<CMatrix> es_s(rs);
        Eigen::SelfAdjointEigenSolver<CMatrix> es_a(ra);
        double gap = 0.0;
        if (rr.object_spectrum.size() != ds || rr.apparatus_spectrum.size() != da) {
            gap = 1.0;
        } else {
            for (Index k = 0; k < ds; ++k)
                gap = std::max(gap, std::abs(rr.object_spectrum(k) - es_s.eigenvalues()(k)));
            for (Index k = 0; k < da; ++k)
                gap = std::max(gap, std::abs(rr.apparatus_spectrum(k) - es_a.eigenvalues()(k)));
        }
        push("reduced_state_spectra", gap);
    } catch (const ValidationError&) {
        // Mixed inputs or channel couplings: the quantity is out of scope.
    }

    rep.ok = rep.max_discrepancy <= tol;
    return rep;
}

std::string render_report(const OracleReport& rep) {
    std::string out;
    for (const Entry& e : rep.entries)
        out += "check " + e.what + " discrepancy=" + report::fmt(e.discrepancy) + "\n";
    out += "oracle checks=" + std::to_string(rep.entries.size()) +
           " max_discrepancy=" + report::fmt(rep.max_discrepancy) +
           " tol=" + report::fmt(rep.tol) + " result=" + (rep.ok ? "PASS" : "FAIL") + "\n";
    return out;
}

} // namespace qmlab::oracle

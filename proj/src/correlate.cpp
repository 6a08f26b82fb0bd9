#include "qmlab/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmlab/errors.hpp"

namespace qmlab::correlate {

namespace {

void require_distinct(const RVector& v, const char* axis) {
    for (Index i = 0; i < v.size(); ++i)
        for (Index j = i + 1; j < v.size(); ++j)
            if (std::abs(v(i) - v(j)) <= 1e-12)
                throw ValidationError(std::string("BivariateDist: ") + axis +
                                      " values must be pairwise distinct");
}

// Normalize the covariance unless a variance degenerates; Schwarz bounds the
// result, so anything beyond roundoff above 1 is a computation error.
void finalize_rho(CorrStats& st, const char* who, double sigma_tol = 1e-12) {
    if (st.sigma1 * st.sigma2 <= sigma_tol) return;
    st.rho = (st.eps12 - st.eps1 * st.eps2) / (st.sigma1 * st.sigma2);
    if (std::abs(st.rho) > 1.0 + 1e-10)
        throw ValidationError(std::string(who) + ": correlation left [-1, 1]");
    st.rho = std::clamp(st.rho, -1.0, 1.0);
    st.defined = true;
}

} // namespace

BivariateDist::BivariateDist(RVector row_values, RVector col_values, RMatrix table,
                             double tol)
    : row_values_(std::move(row_values)), col_values_(std::move(col_values)),
      table_(std::move(table)) {
    if (table_.rows() != row_values_.size() || table_.cols() != col_values_.size())
        throw DimensionError("BivariateDist: table shape does not match value lists");
    if (table_.size() == 0) throw ValidationError("BivariateDist: empty table");
    require_distinct(row_values_, "row");
    require_distinct(col_values_, "column");
    for (Index i = 0; i < table_.rows(); ++i)
        for (Index j = 0; j < table_.cols(); ++j) {
            double& m = table_(i, j);
            if (m < 0.0) {
                if (m < -1e-10)
                    throw ValidationError("BivariateDist: negative mass beyond tolerance");
                m = 0.0;
            }
        }
    if (std::abs(table_.sum() - 1.0) > tol)
        throw ValidationError("BivariateDist: total mass is not 1");
}

CorrStats corr_stats(const BivariateDist& d, double sigma_tol) {
    CorrStats st;
    const RVector mu1 = d.marginal_rows();
    const RVector mu2 = d.marginal_cols();
    const RVector& x = d.row_values();
    const RVector& y = d.col_values();
    st.eps1 = mu1.dot(x);
    st.eps2 = mu2.dot(y);
    double m1sq = mu1.dot(x.cwiseProduct(x));
    double m2sq = mu2.dot(y.cwiseProduct(y));
    st.sigma1 = std::sqrt(std::max(m1sq - st.eps1 * st.eps1, 0.0));
    st.sigma2 = std::sqrt(std::max(m2sq - st.eps2 * st.eps2, 0.0));
    st.eps12 = x.transpose() * d.table() * y;
    finalize_rho(st, "corr_stats", sigma_tol);
    return st;
}

DependenceReport classify_dependence(const BivariateDist& d, double tol) {
    DependenceReport rep;
    const RVector mu1 = d.marginal_rows();
    const RVector mu2 = d.marginal_cols();

    for (Index i = 0; i < d.rows(); ++i)
        for (Index j = 0; j < d.cols(); ++j)
            rep.independence_defect = std::max(
                rep.independence_defect, std::abs(d.table()(i, j) - mu1(i) * mu2(j)));
    if (rep.independence_defect <= tol) {
        rep.kind = Dependence::Independent;
        return rep;
    }

    // candidate map: column argmax over support columns
    rep.map.assign(static_cast<size_t>(d.cols()), -1);
    for (Index j = 0; j < d.cols(); ++j) {
        if (mu2(j) <= tol) continue;
        Index best = 0;
        d.table().col(j).maxCoeff(&best);
        rep.map[static_cast<size_t>(j)] = static_cast<int>(best);
    }
    for (Index i = 0; i < d.rows(); ++i)
        for (Index j = 0; j < d.cols(); ++j) {
            const double want =
                (rep.map[static_cast<size_t>(j)] == static_cast<int>(i)) ? mu2(j) : 0.0;
            rep.dependence_defect =
                std::max(rep.dependence_defect, std::abs(d.table()(i, j) - want));
        }
    if (rep.dependence_defect > tol) {
        rep.kind = Dependence::Dependent;
        return rep;
    }
    rep.kind = Dependence::CompletelyDependent;

    // affine fit x = a y + b over (column value, mapped row value) support pairs
    double sw = 0, sy = 0, sx = 0, syy = 0, sxy = 0;
    int n_support = 0;
    for (Index j = 0; j < d.cols(); ++j) {
        const int i = rep.map[static_cast<size_t>(j)];
        if (i < 0) continue;
        ++n_support;
        const double y = d.col_values()(j);
        const double x = d.row_values()(i);
        sw += 1.0;
        sy += y;
        sx += x;
        syy += y * y;
        sxy += x * y;
    }
    if (n_support >= 2) {
        const double det = sw * syy - sy * sy;
        if (std::abs(det) > 1e-12) {
            AffineLink link;
            link.slope = (sw * sxy - sy * sx) / det;
            link.intercept = (syy * sx - sy * sxy) / det;
            double resid = 0.0;
            for (Index j = 0; j < d.cols(); ++j) {
                const int i = rep.map[static_cast<size_t>(j)];
                if (i < 0) continue;
                resid = std::max(resid,
                                 std::abs(d.row_values()(i) - link.slope * d.col_values()(j) -
                                          link.intercept));
            }
            const double scale =
                std::max(1.0, d.row_values().cwiseAbs().maxCoeff());
            if (resid <= 1e-9 * scale && std::abs(link.slope) > 1e-12)
                rep.link = link;
        }
    }
    return rep;
}

BivariateDist observable_bivariate(const scheme::MeasurementScheme& s,
                                   const quantum::State& t,
                                   const scheme::ReadingScale& r) {
    const quantum::Povm e = s.measured_povm(r);
    const scheme::JointState joint = s.joint_final(t);
    const int n = r.size();
    RMatrix table(n, n);
    for (int i = 0; i < n; ++i) {
        const CMatrix& ei = e.at(i).matrix;
        for (int j = 0; j < n; ++j)
            table(i, j) = joint.expect(ei, s.cell_effect(r, j)).real();
    }
    BivariateDist d(r.values(), r.values(), std::move(table));

    // the column marginal must reproduce the input-state outcome distribution
    // and the row marginal the final-state one; both are structural
    const RVector mu2 = d.marginal_cols();
    const CMatrix rho_s = joint.reduced_object();
    const RVector mu1 = d.marginal_rows();
    for (int j = 0; j < n; ++j) {
        const double before = (t.matrix() * e.at(j).matrix).trace().real();
        if (std::abs(mu2(j) - before) > 1e-10)
            throw ValidationError("observable_bivariate: pointer marginal mismatch");
        const double after = (rho_s * e.at(j).matrix).trace().real();
        if (std::abs(mu1(j) - after) > 1e-10)
            throw ValidationError("observable_bivariate: object marginal mismatch");
    }
    return d;
}

CorrStats audited_correlation(const BivariateDist& d) {
    CorrStats st = corr_stats(d);
    if (st.defined && std::abs(std::abs(st.rho) - 1.0) <= 1e-10) {
        // extremal correlation must coincide with complete dependence through
        // an affine link of the same sign
        const DependenceReport dep = classify_dependence(d, 1e-8);
        if (dep.kind != Dependence::CompletelyDependent || !dep.link ||
            dep.link->slope * st.rho < 0.0)
            throw ValidationError(
                "audited_correlation: |rho| = 1 without an affine dependence");
    }
    return st;
}

CorrStats observable_correlation(const scheme::MeasurementScheme& s,
                                 const quantum::State& t,
                                 const scheme::ReadingScale& r) {
    return audited_correlation(observable_bivariate(s, t, r));
}

CorrStats value_correlation(const scheme::MeasurementScheme& s, const quantum::State& t,
                            const scheme::ReadingScale& r, int i, double tol) {
    const quantum::Povm e = s.measured_povm(r);
    const CMatrix& ei = e.at(i).matrix;
    const CMatrix zc = s.cell_effect(r, i);
    const scheme::JointState joint = s.joint_final(t);
    const Index ds = s.dim_object();
    const CMatrix id_s = linop::identity(ds);
    const CMatrix id_a = linop::identity(s.dim_apparatus());

    CorrStats st;
    st.eps1 = joint.expect(ei, id_a).real();
    st.eps2 = joint.expect(id_s, zc).real();
    st.eps12 = joint.expect(ei, zc).real();
    st.sigma1 = std::sqrt(std::max(joint.expect(ei * ei, id_a).real() - st.eps1 * st.eps1, 0.0));
    st.sigma2 = std::sqrt(std::max(joint.expect(id_s, zc * zc).real() - st.eps2 * st.eps2, 0.0));

    // independent route for the mixed moment: apply the instrument twice
    const CMatrix once = s.instrument_apply(zc, t.matrix());
    const double twice = s.instrument_apply(zc, once).trace().real();
    if (std::abs(twice - st.eps12) > 1e-10)
        throw ReconstructionError("value_correlation: mixed-moment routes disagree");

    const double w = st.eps2; // cell probability
    if (w > tol && w < 1.0 - tol) finalize_rho(st, "value_correlation");
    return st;
}

CorrStats state_correlation(const scheme::MeasurementScheme& s, const quantum::State& t,
                            const scheme::ReadingScale& r, int i, double tol) {
    const scheme::JointState joint = s.joint_final(t);
    const scheme::ComponentStates comp = s.component_states(t, r, i);
    CorrStats st;
    if (comp.weight <= tol) return st; // unreachable reading: undefined
    const CMatrix& ts = comp.object->matrix();
    const CMatrix& ta = comp.apparatus->matrix();
    const CMatrix id_s = linop::identity(s.dim_object());
    const CMatrix id_a = linop::identity(s.dim_apparatus());
    st.eps1 = joint.expect(ts, id_a).real();
    st.eps2 = joint.expect(id_s, ta).real();
    st.eps12 = joint.expect(ts, ta).real();
    st.sigma1 = std::sqrt(std::max(joint.expect(ts * ts, id_a).real() - st.eps1 * st.eps1, 0.0));
    st.sigma2 = std::sqrt(std::max(joint.expect(id_s, ta * ta).real() - st.eps2 * st.eps2, 0.0));
    finalize_rho(st, "state_correlation");
    return st;
}

ReducedStateReport reduced_state_correlation(const scheme::MeasurementScheme& s,
                                             const quantum::State& t) {
    if (!s.coupling().is_unitary())
        throw ValidationError("reduced_state_correlation: coupling must be unitary");
    const scheme::JointState joint = s.joint_final(t);
    if (!joint.pure)
        throw ValidationError("reduced_state_correlation: needs vector-state inputs");

    const CMatrix rho_s = joint.reduced_object();
    const CMatrix rho_a = joint.reduced_apparatus();
    ReducedStateReport rep;
    rep.object_spectrum = linop::herm_eig(rho_s).eigenvalues;
    rep.apparatus_spectrum = linop::herm_eig(rho_a).eigenvalues;

    CorrStats& st = rep.stats;
    st.eps1 = joint.expect(rho_s, linop::identity(joint.dim_a)).real();
    st.eps2 = joint.expect(linop::identity(joint.dim_s), rho_a).real();
    st.eps12 = joint.expect(rho_s, rho_a).real();
    st.sigma1 = std::sqrt(std::max(
        joint.expect(rho_s * rho_s, linop::identity(joint.dim_a)).real() - st.eps1 * st.eps1,
        0.0));
    st.sigma2 = std::sqrt(std::max(
        joint.expect(linop::identity(joint.dim_s), rho_a * rho_a).real() - st.eps2 * st.eps2,
        0.0));
    finalize_rho(st, "reduced_state_correlation");
    return rep;
}

} // namespace qmlab::correlate

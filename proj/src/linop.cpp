#include "qmlab/linop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qmlab::linop {

double frob(const CMatrix& m) { return m.norm(); }

CMatrix dagger(const CMatrix& m) { return m.adjoint(); }

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

CMatrix identity(Index d) { return CMatrix::Identity(d, d); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CMatrix partial_trace(const CMatrix& m, Index dim_s, Index dim_a, Subsystem keep) {
    if (m.rows() != m.cols() || m.rows() != dim_s * dim_a)
        throw DimensionError("partial_trace: operator is not (dimS*dimA)-square");
    if (keep == Subsystem::Object) {
        CMatrix out = CMatrix::Zero(dim_s, dim_s);
        for (Index s = 0; s < dim_s; ++s)
            for (Index t = 0; t < dim_s; ++t) {
                Complex acc = 0;
                for (Index a = 0; a < dim_a; ++a) acc += m(s * dim_a + a, t * dim_a + a);
                out(s, t) = acc;
            }
        return out;
    }
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (Index a = 0; a < dim_a; ++a)
        for (Index b = 0; b < dim_a; ++b) {
            Complex acc = 0;
            for (Index s = 0; s < dim_s; ++s) acc += m(s * dim_a + a, s * dim_a + b);
            out(a, b) = acc;
        }
    return out;
}

HermEig herm_eig(const CMatrix& h, double tol) {
    if (h.rows() != h.cols()) throw DimensionError("herm_eig: matrix not square");
    const double scale = std::max(1.0, h.norm());
    if ((h - h.adjoint()).norm() > tol * scale)
        throw ValidationError("herm_eig: input not Hermitian within tolerance");
    CMatrix sym = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw ValidationError("herm_eig: eigensolver failed to converge");
    return HermEig{solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix psd_sqrt(const CMatrix& p, double tol) {
    HermEig eig = herm_eig(p, tol);
    const double floor = -tol * std::max(1.0, p.norm());
    RVector vals = eig.eigenvalues;
    for (Index k = 0; k < vals.size(); ++k) {
        if (vals[k] < floor)
            throw ValidationError("psd_sqrt: matrix has a negative eigenvalue beyond tolerance");
        vals[k] = std::sqrt(std::max(vals[k], 0.0));
    }
    return eig.eigenvectors * vals.asDiagonal() * eig.eigenvectors.adjoint();
}

CMatrix expm_i_herm(const CMatrix& h, double scale, double tol) {
    HermEig eig = herm_eig(h, tol);
    CVector phases(eig.eigenvalues.size());
    for (Index k = 0; k < phases.size(); ++k)
        phases[k] = std::exp(Complex(0.0, scale * eig.eigenvalues[k]));
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

namespace {

// Rotate v so its largest-magnitude entry is real positive.
void fix_phase(Eigen::Ref<CVector> v, double tol) {
    Index imax = 0;
    double best = 0.0;
    for (Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > best + tol) { best = std::abs(v[i]); imax = i; }
    if (best > tol) v *= std::conj(v[imax] / std::abs(v[imax]));
}

bool lex_less(const CVector& a, const CVector& b, double tol) {
    for (Index i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].real() - b[i].real()) > tol) return a[i].real() < b[i].real();
        if (std::abs(a[i].imag() - b[i].imag()) > tol) return a[i].imag() < b[i].imag();
    }
    return false;
}

} // namespace

SchmidtForm schmidt(const CVector& v, Index dim_s, Index dim_a, double tol) {
    if (v.size() != dim_s * dim_a)
        throw DimensionError("schmidt: vector length is not dimS*dimA");
    // Coefficient matrix C[s,a] = v[s*dimA + a]; reduced object matrix is C C^dag.
    Eigen::Map<const CMatrix> c(v.data(), dim_s, dim_a);
    CMatrix rho_s = c * c.adjoint();
    HermEig eig = herm_eig(rho_s, std::max(tol, kDefaultTol));

    std::vector<Index> order(static_cast<size_t>(dim_s));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&](Index i, Index j) { return eig.eigenvalues[i] > eig.eigenvalues[j]; });

    const double lam_cut = tol * std::max(1.0, rho_s.trace().real());
    std::vector<Index> kept;
    std::vector<CVector> lefts;
    for (Index k : order) {
        double lam = std::max(eig.eigenvalues[k], 0.0);
        if (lam <= lam_cut) continue;
        CVector phi = eig.eigenvectors.col(k);
        fix_phase(phi, tol);
        kept.push_back(k);
        lefts.push_back(std::move(phi));
    }
    // Stable order inside degenerate groups: lexicographic on phase-fixed entries.
    std::vector<size_t> idx(kept.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](size_t i, size_t j) {
        double li = eig.eigenvalues[kept[i]], lj = eig.eigenvalues[kept[j]];
        if (std::abs(li - lj) > tol) return li > lj;
        return lex_less(lefts[i], lefts[j], tol);
    });

    SchmidtForm out;
    out.coefficients.resize(static_cast<Index>(idx.size()));
    out.left.resize(dim_s, static_cast<Index>(idx.size()));
    out.right.resize(dim_a, static_cast<Index>(idx.size()));
    for (size_t r = 0; r < idx.size(); ++r) {
        const size_t i = idx[r];
        const double coeff = std::sqrt(std::max(eig.eigenvalues[kept[i]], 0.0));
        out.coefficients[static_cast<Index>(r)] = coeff;
        out.left.col(static_cast<Index>(r)) = lefts[i];
        // v = sum_k c_k phi_k (x) chi_k  with  chi_k = C^T conj(phi_k) / c_k.
        out.right.col(static_cast<Index>(r)) = (c.transpose() * lefts[i].conjugate()) / coeff;
    }
    return out;
}

CMatrix support_projection(const CMatrix& p, double tol) {
    HermEig eig = herm_eig(p, std::max(tol, kDefaultTol));
    const double scale = std::max(1.0, p.norm());
    CMatrix out = CMatrix::Zero(p.rows(), p.cols());
    for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
        if (eig.eigenvalues[k] < -tol * scale)
            throw ValidationError("support_projection: input not PSD within tolerance");
        if (eig.eigenvalues[k] > tol * scale)
            out += eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint();
    }
    return out;
}

CMatrix apparatus_sandwich(const CMatrix& joint, Index dim_s, Index dim_a,
                           const CMatrix& m) {
    if (joint.rows() != dim_s * dim_a || joint.cols() != joint.rows() ||
        m.rows() != dim_a || m.cols() != dim_a)
        throw DimensionError("apparatus_sandwich: dimension mismatch");
    const CMatrix md = m.adjoint();
    CMatrix out(joint.rows(), joint.cols());
    for (Index s = 0; s < dim_s; ++s)
        for (Index t = 0; t < dim_s; ++t)
            out.block(s * dim_a, t * dim_a, dim_a, dim_a) =
                m * joint.block(s * dim_a, t * dim_a, dim_a, dim_a) * md;
    return out;
}

Complex joint_trace_product(const CMatrix& joint, Index dim_s, Index dim_a,
                            const CMatrix& x_s, const CMatrix& x_a) {
    if (joint.rows() != dim_s * dim_a || x_s.rows() != dim_s || x_a.rows() != dim_a)
        throw DimensionError("joint_trace_product: dimension mismatch");
    // tr[J (Xs (x) Xa)] = sum_{s,t} Xs(t,s) tr[J_block(s,t) Xa]
    Complex acc = 0.0;
    for (Index s = 0; s < dim_s; ++s)
        for (Index t = 0; t < dim_s; ++t) {
            if (x_s(t, s) == Complex(0.0)) continue;
            acc += x_s(t, s) *
                   (joint.block(s * dim_a, t * dim_a, dim_a, dim_a) * x_a).trace();
        }
    return acc;
}

CMatrix reduce_object_with_apparatus_op(const CMatrix& joint, Index dim_s,
                                        Index dim_a, const CMatrix& x_a) {
    if (joint.rows() != dim_s * dim_a || x_a.rows() != dim_a || x_a.cols() != dim_a)
        throw DimensionError("reduce_object_with_apparatus_op: dimension mismatch");
    CMatrix out(dim_s, dim_s);
    for (Index s = 0; s < dim_s; ++s)
        for (Index t = 0; t < dim_s; ++t)
            out(s, t) = (joint.block(s * dim_a, t * dim_a, dim_a, dim_a) * x_a).trace();
    return out;
}

} // namespace qmlab::linop

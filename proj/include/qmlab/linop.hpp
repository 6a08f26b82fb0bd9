#pragma once

#include <complex>
#include <Eigen/Dense>

#include "qmlab/errors.hpp"

namespace qmlab {

using Complex = std::complex<double>;
/// Dense complex matrix, row-major. Composite indices are always
/// (object, apparatus): joint index i = s * dimA + a.
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

namespace linop {

inline constexpr double kDefaultTol = 1e-10;

double frob(const CMatrix& m);
CMatrix dagger(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = kDefaultTol);
CMatrix identity(Index d);

/// Kronecker product with (object, apparatus) index convention.
CMatrix kron(const CMatrix& a, const CMatrix& b);

enum class Subsystem { Object, Apparatus };

/// Trace out the complementary factor of a (dimS*dimA)-dim operator,
/// keeping `keep`. Trace is preserved: tr(result) == tr(m).
CMatrix partial_trace(const CMatrix& m, Index dim_s, Index dim_a, Subsystem keep);

struct HermEig {
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors; // unitary, column k pairs with eigenvalues[k]
};

/// Eigendecomposition of a Hermitian matrix. Throws ValidationError if the
/// Hermiticity defect exceeds tol * max(1, ||h||_F).
HermEig herm_eig(const CMatrix& h, double tol = kDefaultTol);

/// Square root of a PSD matrix. Eigenvalues in [-tol, 0) are clamped to 0;
/// anything below -tol * max(1, ||p||_F) throws.
CMatrix psd_sqrt(const CMatrix& p, double tol = kDefaultTol);

/// exp(i * scale * h) for Hermitian h, computed in the eigenbasis.
CMatrix expm_i_herm(const CMatrix& h, double scale, double tol = kDefaultTol);

struct SchmidtForm {
    RVector coefficients; // positive, descending, squares sum to ||v||^2
    CMatrix left;         // object vectors, one column per coefficient
    CMatrix right;        // apparatus vectors, one column per coefficient
};

/// Schmidt decomposition of a bipartite vector: v = sum_k c_k left_k (x) right_k.
/// Computed from the reduced object matrix; coefficients whose squares fall
/// below tol (relative to the squared vector norm) are dropped.
/// Deterministic: left-vector phases are fixed (largest entry real positive)
/// and degenerate coefficients are ordered lexicographically by entries.
SchmidtForm schmidt(const CVector& v, Index dim_s, Index dim_a, double tol = kDefaultTol);

/// Projection onto the range of a PSD matrix (eigenvalue threshold at
/// tol * max(1, ||p||_F)). Throws on non-PSD input beyond tolerance.
CMatrix support_projection(const CMatrix& p, double tol = kDefaultTol);

/// (I (x) m) J (I (x) m^dag) on a joint operator, computed blockwise.
CMatrix apparatus_sandwich(const CMatrix& joint, Index dim_s, Index dim_a,
                           const CMatrix& m);

/// tr[J (x_s (x) x_a)] without materializing the Kronecker product.
Complex joint_trace_product(const CMatrix& joint, Index dim_s, Index dim_a,
                            const CMatrix& x_s, const CMatrix& x_a);

/// Partial trace over the apparatus with an apparatus-side operator inserted:
/// out(s,t) = tr[J_block(s,t) * x_a], i.e. R_S(J (I (x) x_a)).
CMatrix reduce_object_with_apparatus_op(const CMatrix& joint, Index dim_s,
                                        Index dim_a, const CMatrix& x_a);

} // namespace linop
} // namespace qmlab

#pragma once

#include <optional>
#include <vector>

#include "qmlab/quantum.hpp"
#include "qmlab/scheme.hpp"

namespace qmlab::correlate {

/// Joint distribution of two real-valued readings on a finite outcome grid.
class BivariateDist {
public:
    /// table(i, j) is the joint mass at (row_values[i], col_values[j]).
    /// Entries in [-1e-10, 0) are clamped to zero; the total mass must be 1
    /// within tol and values must be pairwise distinct per axis.
    BivariateDist(RVector row_values, RVector col_values, RMatrix table,
                  double tol = 1e-10);

    const RVector& row_values() const { return row_values_; }
    const RVector& col_values() const { return col_values_; }
    const RMatrix& table() const { return table_; }
    Index rows() const { return table_.rows(); }
    Index cols() const { return table_.cols(); }

    RVector marginal_rows() const { return table_.rowwise().sum(); }
    RVector marginal_cols() const { return table_.colwise().sum().transpose(); }

private:
    RVector row_values_;
    RVector col_values_;
    RMatrix table_;
};

/// First and second moments of the two readings and their normalized
/// correlation. `defined` is false exactly when sigma1*sigma2 degenerates.
struct CorrStats {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double eps12 = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double rho = 0.0;
    bool defined = false;
};

CorrStats corr_stats(const BivariateDist& d, double sigma_tol = 1e-12);

/// Row reading as an affine function of the column reading: x = slope*y + b.
struct AffineLink {
    double slope = 0.0;
    double intercept = 0.0;
};

enum class Dependence { Independent, Dependent, CompletelyDependent };

struct DependenceReport {
    Dependence kind = Dependence::Dependent;
    /// column -> row over support columns (-1 off support); meaningful only
    /// for the completely dependent verdict.
    std::vector<int> map;
    /// present when the map is affine over the support values
    std::optional<AffineLink> link;
    double independence_defect = 0.0; // max |mu(i,j) - mu1(i) mu2(j)|
    double dependence_defect = 0.0;   // max |mu(i,j) - mu2(j) [i = h(j)]|
};

/// Independent when the table factorizes; completely dependent when the row
/// reading is a function of the column reading on the support. The function
/// is found as the column argmax and never assumed affine: the affine link
/// is fit afterwards and reported only if it reproduces the map.
DependenceReport classify_dependence(const BivariateDist& d, double tol = 1e-10);

/// corr_stats plus the extremal-correlation audit: |rho| = 1 within 1e-10
/// must coincide with complete dependence through an affine link of the
/// matching slope sign, else the distribution is inconsistent.
CorrStats audited_correlation(const BivariateDist& d);

/// Joint distribution of (measured observable, pointer observable) readings
/// on a common scale, taken in the post-interaction joint state.
BivariateDist observable_bivariate(const scheme::MeasurementScheme& s,
                                   const quantum::State& t,
                                   const scheme::ReadingScale& r);

/// Correlation of the measured and pointer readings. When |rho| = 1 within
/// 1e-10 the distribution is additionally verified to be completely
/// dependent with an affine link of matching sign.
CorrStats observable_correlation(const scheme::MeasurementScheme& s,
                                 const quantum::State& t,
                                 const scheme::ReadingScale& r);

/// Correlation of the quantities E_i (x) I and I (x) Z_i in the final joint
/// state, for one reading cell. The mixed moment is cross-checked against a
/// second application of the instrument. rho carries the undefined flag when
/// the cell weight leaves (tol, 1-tol) or a variance degenerates.
CorrStats value_correlation(const scheme::MeasurementScheme& s,
                            const quantum::State& t, const scheme::ReadingScale& r,
                            int i, double tol = 1e-10);

/// Correlation of the component-state quantities T_S(i) (x) I and
/// I (x) T_A(i) in the final joint state.
CorrStats state_correlation(const scheme::MeasurementScheme& s,
                            const quantum::State& t, const scheme::ReadingScale& r,
                            int i, double tol = 1e-10);

struct ReducedStateReport {
    CorrStats stats;
    RVector object_spectrum;    // ascending
    RVector apparatus_spectrum; // ascending; matches object spectrum on support
};

/// Correlation of the two reduced states, as quantities, in the final joint
/// vector state. Requires a unitary coupling and vector inputs on both sides;
/// defined whenever the final state is entangled with a non-flat spectrum,
/// and then equal to 1.
ReducedStateReport reduced_state_correlation(const scheme::MeasurementScheme& s,
                                             const quantum::State& t);

} // namespace qmlab::correlate

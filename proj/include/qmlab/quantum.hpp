#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qmlab/linop.hpp"

namespace qmlab::quantum {

/// Density operator. Validation is eager: Hermiticity, positivity and unit
/// trace are checked at construction (tolerance 1e-10 scaled by norm).
class State {
public:
    explicit State(CMatrix m, double tol = 1e-10);

    /// Construction for algebraically guaranteed results (unitary images of
    /// validated states and the like): Hermiticity/trace checked, spectrum not.
    static State trusted(CMatrix m, double tol = 1e-8);
    static State vector_state(const CVector& v, double tol = 1e-10);

    const CMatrix& matrix() const { return m_; }
    Index dim() const { return m_.rows(); }

    /// Unit vector spanning the support if the state is rank one, else nullopt.
    std::optional<CVector> principal_vector(double tol = 1e-9) const;

private:
    struct Trusted {};
    State(CMatrix m, Trusted) : m_(std::move(m)) {}
    CMatrix m_;
};

/// Operator between O and I, carrying the real outcome label it reports.
struct Effect {
    CMatrix matrix;
    double label = 0.0;

    Effect(CMatrix m, double lab, double tol = 1e-10);
};

/// Finite POVM: effects summing to the identity, labels pairwise distinct.
class Povm {
public:
    Povm(std::vector<Effect> effects, double tol = 1e-10);

    Index dim() const { return dim_; }
    int size() const { return static_cast<int>(effects_.size()); }
    const Effect& at(int i) const { return effects_.at(static_cast<size_t>(i)); }
    const std::vector<Effect>& effects() const { return effects_; }

private:
    Index dim_ = 0;
    std::vector<Effect> effects_;
};

/// Outcome probability tr(T E); rejects values outside [0,1] beyond 1e-12.
double prob(const State& t, const Effect& e);

/// Distribution over a POVM's outcomes; sums to 1 within 1e-10.
RVector outcome_distribution(const State& t, const Povm& povm);

struct SharpnessReport {
    bool sharp = false;
    double worst_idempotency = 0.0; // max_i ||E_i^2 - E_i||_F
    double worst_cross = 0.0;       // max_{i!=j} ||E_i E_j||_F
    std::vector<double> idempotency_defects;
};

/// A POVM is sharp when every effect is a projection and distinct effects
/// are mutually orthogonal.
SharpnessReport is_sharp(const Povm& povm, double tol = 1e-10);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Spectral POVM of a Hermitian operator, binned by intervals. An eigenvalue
/// belongs to the covering interval with the largest lower edge (half-open
/// semantics at shared edges, closed at the top). Every eigenvalue must be
/// covered and interval interiors must not overlap.
Povm spectral_povm(const CMatrix& h, std::span<const Interval> cells,
                   std::span<const double> labels, double tol = 1e-10);

/// Rank-one projections onto the computational basis, labelled 0..d-1.
Povm basis_povm(Index d);

} // namespace qmlab::quantum

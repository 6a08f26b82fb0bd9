#pragma once

#include <span>
#include <string>
#include <vector>

#include "qmlab/quantum.hpp"
#include "qmlab/scheme.hpp"

namespace qmlab::transformer {

/// Tri-state check outcome: a defect inside tolerance holds, a defect inside
/// a factor-10 band of it is borderline numerics, anything beyond fails.
enum class Verdict { Holds, Inconclusive, Fails };

Verdict classify_defect(double defect, double tol);
std::string to_string(Verdict v);

/// The outcome-indexed family of maps T -> I_i(T): the unnormalized
/// post-measurement object state for reading cell i. Linear, positive, and
/// trace-compatible with the measured observable: tr[I_i(T)] = tr[T E_i].
class StateTransformer {
public:
    StateTransformer(const scheme::MeasurementScheme& s, scheme::ReadingScale scale);

    const scheme::ReadingScale& scale() const { return scale_; }
    const quantum::Povm& observable() const { return observable_; }
    int size() const { return scale_.size(); }

    /// I_i(T), unnormalized: trace is the outcome probability.
    CMatrix apply(int i, const quantum::State& t) const;

    /// Same map on an arbitrary (not necessarily normalized) PSD matrix;
    /// this is what composition tests feed back in.
    CMatrix apply_raw(int i, const CMatrix& t) const;

    /// All cells at once; summing the results gives the final reduced
    /// object state of the interaction.
    std::vector<CMatrix> apply_all(const quantum::State& t) const;

private:
    const scheme::MeasurementScheme& scheme_;
    scheme::ReadingScale scale_;
    std::vector<CMatrix> cell_effects_;
    quantum::Povm observable_;
};

struct FirstKindReport {
    Verdict verdict = Verdict::Holds;
    double max_deviation = 0.0; // worst |p_i(T) - p_i(I_Omega(T))|
    int worst_cell = -1;
    int worst_state = -1;
};

/// A measurement is of the first kind when the outcome distribution is the
/// same before and after the interaction.
FirstKindReport check_first_kind(const StateTransformer& st,
                                 std::span<const quantum::State> states,
                                 double tol = 1e-10);

struct RepeatReport {
    Verdict verdict = Verdict::Holds;
    double worst_prob_defect = 0.0;  // |p(repeat same cell) - 1|
    double worst_eigen_defect = 0.0; // ||E_i T_S(i) - T_S(i)||_F
    std::vector<double> cell_defects; // per cell, max over states and both forms
};

/// Repeatable: once a reading is obtained, repeating the measurement on the
/// component state reproduces it with certainty. Checked in both the
/// probability form and the eigenvalue-equation form.
RepeatReport check_repeatable(const StateTransformer& st,
                              std::span<const quantum::State> states,
                              double tol = 1e-10);

struct ComposeReport {
    Verdict verdict = Verdict::Holds;
    double worst_defect = 0.0; // |tr[I_i(I_j(T))] - delta_ij tr[I_i(T)]|
};

/// Two-pass form of repeatability: composing the transformer with itself
/// concentrates all weight on the diagonal i == j.
ComposeReport check_repeat_composition(const StateTransformer& st,
                                       std::span<const quantum::State> states,
                                       double tol = 1e-10);

/// d^2 pure states spanning the Hermitian operators on C^d: the basis
/// projections and the +/i superpositions of every pair.
std::vector<quantum::State> hermitian_basis_states(Index d);

/// The spanning set above plus n_random seeded full-rank states. Checks
/// quantified over "all states" run over this set; every condition involved
/// is affine in T, so a spanning family is decisive up to numerics.
std::vector<quantum::State> test_state_set(Index d, int n_random = 20,
                                           std::uint64_t seed = 7);

} // namespace qmlab::transformer

#pragma once

#include <optional>
#include <vector>

#include "qmlab/linop.hpp"
#include "qmlab/quantum.hpp"

namespace qmlab::scheme {

/// Premeasurement coupling on the object-apparatus space. Three storage
/// forms: a dense unitary, a Kraus channel (trace preserving), and the
/// factored form exp(i*lambda*A(x)B) kept as the two eigenbases — the latter
/// applies in O(dim^3) without ever materializing the joint matrix.
class Coupling {
public:
    enum class Kind { Unitary, Channel, ProductUnitary };

    static Coupling unitary(CMatrix u, Index dim_s, Index dim_a, double tol = 1e-9);
    static Coupling channel(std::vector<CMatrix> kraus, Index dim_s, Index dim_a,
                            double tol = 1e-9);
    static Coupling product(const CMatrix& object_gen, const CMatrix& apparatus_gen,
                            double lambda, double tol = 1e-10);

    Kind kind() const { return kind_; }
    bool is_unitary() const { return kind_ != Kind::Channel; }
    Index dim_object() const { return dim_s_; }
    Index dim_apparatus() const { return dim_a_; }
    Index dim_joint() const { return dim_s_ * dim_a_; }

    /// The channel action X -> U X U^dag (or sum_k K X K^dag). Linear in X;
    /// accepts non-Hermitian inputs (matrix units) as well.
    CMatrix apply(const CMatrix& joint) const;

    /// Unitary action on a joint vector stored as a dimS x dimA coefficient
    /// matrix (row-major flattening matches the joint index convention).
    CMatrix apply_coeffs(const CMatrix& coeffs) const;
    CVector apply_vector(const CVector& psi) const;

    /// Materialized unitary; guarded against large joint dimensions.
    CMatrix dense_unitary() const;

    const std::vector<CMatrix>& kraus() const;

    // Factored-form accessors (ProductUnitary only).
    const RVector& object_eigenvalues() const;
    const CMatrix& object_eigenvectors() const;
    const RVector& apparatus_eigenvalues() const;
    const CMatrix& apparatus_eigenvectors() const;
    double lambda() const;

private:
    Coupling() = default;
    Kind kind_ = Kind::Unitary;
    Index dim_s_ = 0, dim_a_ = 0;
    std::vector<CMatrix> ops_;       // Unitary: one entry; Channel: Kraus list
    RVector alpha_, beta_;           // ProductUnitary spectra
    CMatrix va_, vb_;                // ProductUnitary eigenvector bases
    double lambda_ = 0.0;
};

/// One cell of a reading scale: the pointer-outcome indices it aggregates
/// and the real value reported for it.
struct ReadingCell {
    std::vector<int> pointer_indices;
    double value = 0.0;
};

/// Finite partition of the pointer outcome set into valued cells.
class ReadingScale {
public:
    ReadingScale(std::vector<ReadingCell> cells, int n_pointer_outcomes);

    /// One cell per pointer outcome, valued by the pointer effect labels.
    static ReadingScale finest(const quantum::Povm& pointer);

    int size() const { return static_cast<int>(cells_.size()); }
    int n_pointer() const { return n_pointer_; }
    const ReadingCell& cell(int i) const { return cells_.at(static_cast<size_t>(i)); }
    RVector values() const;

private:
    std::vector<ReadingCell> cells_;
    int n_pointer_ = 0;
};

/// Joint post-interaction state, kept as a coefficient matrix when the
/// inputs are pure and the coupling unitary (the only representation that
/// scales to large truncated models), dense otherwise.
struct JointState {
    Index dim_s = 0, dim_a = 0;
    bool pure = false;
    CMatrix coeffs;   // dimS x dimA, pure case
    CMatrix density;  // joint density, mixed case

    double total() const;                                   // trace
    Complex expect(const CMatrix& x_s, const CMatrix& x_a) const;
    CMatrix reduced_object() const;
    CMatrix reduced_apparatus() const;
    CMatrix dense() const;                                  // materializes
};

/// Normalized conditional states for one reading-scale cell. Zero-weight
/// cells carry no states (the zero-state sentinel): downstream consumers
/// skip them exactly as the conditional constructions require.
struct ComponentStates {
    int cell = 0;
    double weight = 0.0;
    std::optional<quantum::State> object;
    std::optional<quantum::State> apparatus;
};

struct AdditivityReport {
    double residual = 0.0;
    bool ok = false;
};

struct ValueDefinitenessReport {
    struct Cell {
        int cell = 0;
        double weight = 0.0;
        double prob_defect = 0.0;   // |tr[T_A(i) Z_i] - 1|
        double eigen_defect = 0.0;  // ||Z_i T_A(i) - T_A(i)||_F
        bool ok = false;
    };
    std::vector<Cell> cells;
    bool all_ok = true;
    double worst_prob_defect = 0.0;
    double worst_eigen_defect = 0.0;
};

struct MixtureReport {
    double residual = 0.0;
    bool ok = false;
};

struct OrthogonalityReport {
    bool ok = true;
    RMatrix table;                   // tr[T_S(i) T_S(j)] for weighted cells
    double worst_off_diagonal = 0.0;
};

/// Measurement scheme: apparatus state, pointer observable, coupling, and a
/// pointer function (an index relabeling, identity by default) that the
/// default reading scale groups by.
class MeasurementScheme {
public:
    MeasurementScheme(Coupling coupling, quantum::State apparatus_state,
                      quantum::Povm pointer, std::vector<int> pointer_map = {});

    Index dim_object() const { return coupling_.dim_object(); }
    Index dim_apparatus() const { return coupling_.dim_apparatus(); }
    const Coupling& coupling() const { return coupling_; }
    const quantum::State& apparatus_state() const { return apparatus_state_; }
    const quantum::Povm& pointer() const { return pointer_; }
    const std::vector<int>& pointer_map() const { return pointer_map_; }

    /// Cells grouped by the pointer function; cell value = function value.
    ReadingScale default_scale() const;

    /// Apparatus-side effect of one cell: sum of its pointer effects.
    CMatrix cell_effect(const ReadingScale& r, int i) const;

    JointState joint_final(const quantum::State& t) const;
    quantum::State joint_final_state(const quantum::State& t) const;

    /// The object observable this scheme measures on reading scale r,
    /// reconstructed from the scheme's action on a full operator basis.
    /// Throws ReconstructionError if the result fails POVM validity.
    quantum::Povm measured_povm(const ReadingScale& r, double tol = 1e-9) const;

    /// Unnormalized conditioned joint state for cell i (dense).
    CMatrix conditioned_joint(const quantum::State& t, const ReadingScale& r,
                              int i) const;

    ComponentStates component_states(const quantum::State& t, const ReadingScale& r,
                                     int i, double weight_tol = 1e-12) const;
    std::vector<ComponentStates> all_components(const quantum::State& t,
                                                const ReadingScale& r,
                                                double weight_tol = 1e-12) const;

    /// Unnormalized object component weight*T_S(i,T) for cell i, computed
    /// without the dense joint state. This is the transformer cell map.
    CMatrix object_component_unnormalized(const JointState& joint,
                                          const CMatrix& cell_eff) const;

    /// The instrument map on an arbitrary Hermitian input: evolve x (x) T_A
    /// through the coupling and condition on the cell effect. Linear in x;
    /// for unitary couplings with a rank-one apparatus this runs spectrally
    /// and never materializes the joint operator.
    CMatrix instrument_apply(const CMatrix& cell_eff, const CMatrix& x) const;

    AdditivityReport check_object_additivity(const quantum::State& t,
                                             const ReadingScale& r,
                                             double tol = 1e-10) const;
    ValueDefinitenessReport check_pointer_value_definiteness(
        const quantum::State& t, const ReadingScale& r, double tol = 1e-10) const;
    MixtureReport check_pointer_mixture(const quantum::State& t,
                                        const ReadingScale& r,
                                        double tol = 1e-10) const;
    OrthogonalityReport check_component_orthogonality(const quantum::State& t,
                                                      const ReadingScale& r,
                                                      double tol = 1e-10) const;

private:
    struct CellData {
        double weight = 0.0;
        CMatrix object_unnorm;     // weight * T_S(i)
        CMatrix apparatus_unnorm;  // weight * T_A(i)
    };
    CellData cell_data(const JointState& joint, const CMatrix& cell_eff) const;

    Coupling coupling_;
    quantum::State apparatus_state_;
    quantum::Povm pointer_;
    std::vector<int> pointer_map_;
};

} // namespace qmlab::scheme

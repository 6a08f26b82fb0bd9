#pragma once

#include <span>
#include <vector>

#include "qmlab/correlate.hpp"
#include "qmlab/linop.hpp"
#include "qmlab/quantum.hpp"
#include "qmlab/scheme.hpp"

namespace qmlab::models {

using scheme::MeasurementScheme;
using scheme::ReadingScale;

/// Generators of a product coupling U = exp(i*lambda*A(x)B). Everything the
/// coupling family admits in closed form (shifted apparatus states, the
/// measured observable, the Kraus form of the instrument) is derived from
/// the two spectral decompositions, so the joint unitary never needs to be
/// materialized.
struct ProductCouplingSpec {
    CMatrix object_gen;     // A, Hermitian on the object space
    CMatrix apparatus_gen;  // B, Hermitian on the apparatus space
    double lambda = 0.0;

    ProductCouplingSpec(CMatrix a, CMatrix b, double lam,
                        double tol = linop::kDefaultTol);
};

MeasurementScheme build_product_scheme(const ProductCouplingSpec& spec,
                                       quantum::Povm pointer,
                                       quantum::State apparatus_state,
                                       std::vector<int> pointer_map = {});

/// exp(i*lambda*a*B) T_A exp(-i*lambda*a*B): the apparatus state as displaced
/// by coupling to an object eigenvalue a.
quantum::State shifted_apparatus_state(const ProductCouplingSpec& spec, double a,
                                       const quantum::State& apparatus_state);

/// The measured observable assembled per object eigenvalue:
/// E_i = sum_k tr[T_A^{lambda a_k} Z(cell_i)] P_k over the spectral
/// projections P_k of the object generator. With cross_check the result is
/// recomputed through the generic operator-basis reconstruction and any
/// disagreement beyond 1e-8 raises ReconstructionError; large sweeps disable
/// the cross-check and rely on the small-dimension agreement tests instead.
quantum::Povm measured_povm_closed_form(const ProductCouplingSpec& spec,
                                        const quantum::Povm& pointer,
                                        const quantum::State& apparatus_state,
                                        const ReadingScale& r,
                                        bool cross_check = true);

/// T_S(i, T) assembled from the explicit operator-sum form of the
/// product-coupling instrument: L_{kn} diagonal in the object eigenbasis,
/// summed over an apparatus basis k and the apparatus-state spectrum n.
/// Checked against the partial-trace route within 1e-8.
quantum::State kraus_component_state(const MeasurementScheme& s,
                                     const quantum::State& t, const ReadingScale& r,
                                     int i);

/// Two-outcome scheme P0(x)I + P1(x)R_y(theta) with the apparatus read in
/// the basis pointer: measures {I - sin^2(theta/2) P1, sin^2(theta/2) P1}.
/// Unsharp for theta < pi: of the first kind yet not repeatable.
MeasurementScheme build_controlled_rotation(double theta);

/// The theta = pi limit realized exactly: U = exp(i*(pi/2)*P1(x)(X - I))
/// equals CNOT, a sharp repeatable scheme.
MeasurementScheme build_cnot();

/// Cyclic shift register: apparatus dimension n, coupling
/// U = sum_k P_k (x) S^{a_k} with S the cyclic shift, pointer starting at
/// |0> and read in the position basis. The default reading scale has one
/// cell per object eigenvalue, valued by it, plus a zero-weight rest cell
/// valued min(a)-1 when some positions stay unused.
MeasurementScheme build_shift_model(Index n, const std::vector<int>& eigenvalues);

// --- truncated bosonic mode -------------------------------------------------

CMatrix ladder(Index n);               // annihilation operator, a|k> = sqrt(k)|k-1>
CMatrix position_quadrature(Index n);  // (a^dag + a)/sqrt(2)
CMatrix momentum_quadrature(Index n);  // i(a^dag - a)/sqrt(2)
CVector vacuum_state(Index n);
CVector coherent_state(Index n, Complex alpha);
/// Squeezed vacuum with Var(momentum quadrature) ~ exp(-2r)/2 (r > 0
/// squeezes the readout quadrature below the vacuum value 1/2).
CVector squeezed_probe(Index n, double r);

/// Guard shared by the quadrature builders: inputs whose top Fock level
/// carries more than tol population make every truncated moment meaningless,
/// so they are rejected up front (TruncationError).
void require_truncation_headroom(const CVector& probe, const quantum::State& signal,
                                 double tol = 1e-6);

/// Homodyne-style meter on two truncated modes: the signal's amplitude
/// quadrature a^q couples to the probe's b^q, and the conjugate b^p is read
/// out. The pointer observable resolves every b^p eigenvalue; `fine_scale`
/// reads it one eigenvalue per cell, while `scale` groups the eigenvalues
/// into equal-probability bins under the final pointer distribution of the
/// signal supplied at build time, both valued through the pointer function
/// x -> x/lambda.
struct QuadratureModel {
    Index n = 0;
    double lambda = 0.0;
    CVector probe;
    CMatrix signal_quadrature;    // a^q
    CMatrix coupling_quadrature;  // b^q
    CMatrix readout_quadrature;   // b^p

    linop::HermEig signal_eig;    // of a^q, ascending
    linop::HermEig coupling_eig;  // of b^q, ascending
    linop::HermEig readout_eig;   // of b^p, ascending

    /// ||[b^q, b^p] - iI|| with the top Fock row/column masked out; the
    /// truncated commutator is exact away from the top level.
    double commutator_defect = 0.0;

    /// response(m, k) = <y_m| T_A^{lambda a_k} |y_m>: the pointer response
    /// to object eigenvalue a_k, over readout eigenvalues y_m.
    RMatrix response;
    /// Top Fock-level mass of the displaced probe per object eigenvalue;
    /// its signal average is the truncation-defect diagnostic.
    RVector shifted_top_mass;

    MeasurementScheme scheme;
    ReadingScale scale;       // binned cells, values = bin probability-median / lambda
    ReadingScale fine_scale;  // one cell per eigenvalue, values = y_m / lambda
};

QuadratureModel build_quadrature_model(Index n, double lambda, const CVector& probe,
                                       const quantum::State& signal, Index bins);

/// Split of the measured-observable variance into the intrinsic signal part
/// and the probe noise: Var(E) = Var(a^q) + lambda^{-2} Var(b^p, probe).
/// The residual of that identity is returned, not asserted: past the pointer
/// range it grows with the truncation defect, and the sweep reports it.
struct VarianceDecomposition {
    double var_e = 0.0;             // variance of the finest-scale readout
    double var_aq = 0.0;            // signal quadrature variance
    double noise_term = 0.0;        // lambda^{-2} * probe readout variance
    double identity_defect = 0.0;   // |var_e - var_aq - noise_term|
    double evolved_top_mass = 0.0;  // signal-averaged displaced-probe top mass
};

VarianceDecomposition variance_decomposition(const QuadratureModel& m,
                                             const quantum::State& signal);

/// Joint distribution of (measured observable, pointer) readings on scale r,
/// computed in the two generators' eigenbases; agrees with the generic
/// observable_bivariate and stays O(n^3) at any truncation.
correlate::BivariateDist quadrature_observable_bivariate(const QuadratureModel& m,
                                                         const quantum::State& signal,
                                                         const ReadingScale& r);

correlate::CorrStats quadrature_observable_correlation(const QuadratureModel& m,
                                                       const quantum::State& signal,
                                                       const ReadingScale& r);

/// Value correlation of cell i through the closed-form chain the smeared
/// readout admits: eps12 = <E_i^2>, eps1 = eps2 = <E_i>, equal variances —
/// hence rho = 1 whenever defined. The generic value_correlation evaluates
/// the mixed moment in the coupled state instead and reports below 1; the
/// two quantify different readings of the same cell.
correlate::CorrStats quadrature_value_correlation(const QuadratureModel& m,
                                                  const quantum::State& signal,
                                                  const ReadingScale& r, int i,
                                                  double tol = 1e-10);

struct SweepRow {
    double lambda = 0.0;
    double var_aq = 0.0;
    double var_bp_scaled = 0.0;
    double var_e = 0.0;
    double rho_obs = 0.0;
    double rho_value_cell0 = 0.0;
    double truncation_defect = 0.0;  // evolved-state top Fock mass
};

/// One row per lambda, in the given order: variance decomposition, the
/// fine-scale observable correlation, and the binned cell-0 value
/// correlation, with the truncation diagnostic that flags rows whose pointer
/// displacement has outrun the truncated readout range.
std::vector<SweepRow> quadrature_correlation_sweep(Index n, const CVector& probe,
                                                   const quantum::State& signal,
                                                   std::span<const double> lambdas,
                                                   Index bins);

} // namespace qmlab::models

#include "qmlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <utility>

#include "qmlab/errors.hpp"

namespace qmlab::models {

namespace {

std::string fmt_mass(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// Diagonal of a state in the given eigenbasis, clamped to [0, inf).
RVector populations_in(const linop::HermEig& eig, const CMatrix& rho) {
    RVector p = (eig.eigenvectors.adjoint() * rho * eig.eigenvectors).diagonal().real();
    for (Index k = 0; k < p.size(); ++k) p(k) = std::max(p(k), 0.0);
    return p;
}

CMatrix cell_effect_of(const quantum::Povm& pointer, const scheme::ReadingCell& cell) {
    CMatrix z = CMatrix::Zero(pointer.dim(), pointer.dim());
    for (int idx : cell.pointer_indices) z += pointer.at(idx).matrix;
    return z;
}

} // namespace

ProductCouplingSpec::ProductCouplingSpec(CMatrix a, CMatrix b, double lam, double tol)
    : object_gen(std::move(a)), apparatus_gen(std::move(b)), lambda(lam) {
    if (object_gen.rows() != object_gen.cols() ||
        apparatus_gen.rows() != apparatus_gen.cols())
        throw DimensionError("product coupling: generators must be square");
    if (!linop::is_hermitian(object_gen, tol))
        throw ValidationError("product coupling: object generator must be Hermitian");
    if (!linop::is_hermitian(apparatus_gen, tol))
        throw ValidationError("product coupling: apparatus generator must be Hermitian");
}

MeasurementScheme build_product_scheme(const ProductCouplingSpec& spec,
                                       quantum::Povm pointer,
                                       quantum::State apparatus_state,
                                       std::vector<int> pointer_map) {
    scheme::Coupling c =
        scheme::Coupling::product(spec.object_gen, spec.apparatus_gen, spec.lambda);
    return MeasurementScheme(std::move(c), std::move(apparatus_state),
                             std::move(pointer), std::move(pointer_map));
}

quantum::State shifted_apparatus_state(const ProductCouplingSpec& spec, double a,
                                       const quantum::State& apparatus_state) {
    if (apparatus_state.dim() != spec.apparatus_gen.rows())
        throw DimensionError("shifted_apparatus_state: dimension mismatch");
    const CMatrix u = linop::expm_i_herm(spec.apparatus_gen, spec.lambda * a);
    return quantum::State::trusted(u * apparatus_state.matrix() * u.adjoint());
}

quantum::Povm measured_povm_closed_form(const ProductCouplingSpec& spec,
                                        const quantum::Povm& pointer,
                                        const quantum::State& apparatus_state,
                                        const ReadingScale& r, bool cross_check) {
    const Index da = spec.apparatus_gen.rows();
    const Index ds = spec.object_gen.rows();
    if (pointer.dim() != da || apparatus_state.dim() != da)
        throw DimensionError("measured_povm_closed_form: apparatus dimension mismatch");
    if (r.n_pointer() != pointer.size())
        throw DimensionError("measured_povm_closed_form: scale does not fit the pointer");

    const linop::HermEig ae = linop::herm_eig(spec.object_gen);
    const linop::HermEig be = linop::herm_eig(spec.apparatus_gen);

    // apparatus state and cell effects expressed in the B eigenbasis, where
    // the displacement exp(i*lambda*a_k*B) is a phase diagonal
    const CMatrix bt = be.eigenvectors.adjoint() * apparatus_state.matrix() * be.eigenvectors;
    std::vector<CMatrix> zb(static_cast<size_t>(r.size()));
    for (int i = 0; i < r.size(); ++i) {
        const CMatrix z = cell_effect_of(pointer, r.cell(i));
        // transposed so the trace pairing below is a cwise sum
        zb[static_cast<size_t>(i)] =
            (be.eigenvectors.adjoint() * z * be.eigenvectors).transpose();
    }

    std::vector<CMatrix> effects(static_cast<size_t>(r.size()),
                                 CMatrix::Zero(ds, ds));
    for (Index k = 0; k < ds; ++k) {
        CVector ph(da);
        for (Index p = 0; p < da; ++p)
            ph(p) = std::exp(Complex(0.0, spec.lambda * ae.eigenvalues(k) *
                                              be.eigenvalues(p)));
        const CMatrix tsh = ph.asDiagonal() * bt * ph.conjugate().asDiagonal();
        const CMatrix pk =
            ae.eigenvectors.col(k) * ae.eigenvectors.col(k).adjoint();
        for (int i = 0; i < r.size(); ++i) {
            double w = tsh.cwiseProduct(zb[static_cast<size_t>(i)]).sum().real();
            if (w < -1e-8 || w > 1.0 + 1e-8)
                throw ReconstructionError(
                    "measured_povm_closed_form: cell response left [0, 1]");
            w = std::clamp(w, 0.0, 1.0);
            effects[static_cast<size_t>(i)] += w * pk;
        }
    }

    std::vector<quantum::Effect> list;
    list.reserve(effects.size());
    const RVector values = r.values();
    for (int i = 0; i < r.size(); ++i)
        list.emplace_back(effects[static_cast<size_t>(i)], values(i));
    quantum::Povm povm(std::move(list));

    if (cross_check) {
        const MeasurementScheme s = build_product_scheme(spec, pointer, apparatus_state);
        const quantum::Povm generic = s.measured_povm(r);
        for (int i = 0; i < r.size(); ++i) {
            const double d = linop::frob(povm.at(i).matrix - generic.at(i).matrix);
            if (d > 1e-8)
                throw ReconstructionError(
                    "measured_povm_closed_form: routes disagree by " + fmt_mass(d));
        }
    }
    return povm;
}

quantum::State kraus_component_state(const MeasurementScheme& s, const quantum::State& t,
                                     const ReadingScale& r, int i) {
    if (s.coupling().kind() != scheme::Coupling::Kind::ProductUnitary)
        throw ValidationError("kraus_component_state: needs a product coupling");
    const CMatrix& va = s.coupling().object_eigenvectors();
    const RVector& alpha = s.coupling().object_eigenvalues();
    const CMatrix& vb = s.coupling().apparatus_eigenvectors();
    const RVector& beta = s.coupling().apparatus_eigenvalues();
    const double lam = s.coupling().lambda();
    const Index ds = s.dim_object();
    const Index da = s.dim_apparatus();

    const CMatrix rt = linop::psd_sqrt(s.cell_effect(r, i));
    const linop::HermEig te = linop::herm_eig(s.apparatus_state().matrix());
    const CMatrix tp = va.adjoint() * t.matrix() * va;

    // Every Kraus operator L_{kn} is diagonal in the A eigenbasis with entries
    // c_{kn}(v) = (Z_i^{1/2} e^{i lam a_v B} phi_n)_k, so the operator sum is
    // a Hadamard product with the Gram matrix sum_k c_kn c_kn^dag.
    CMatrix acc = CMatrix::Zero(ds, ds);
    for (Index nn = 0; nn < da; ++nn) {
        const double tn = te.eigenvalues(nn);
        if (tn <= 1e-14) continue;
        const CVector phi_b = vb.adjoint() * te.eigenvectors.col(nn);
        CMatrix u(da, ds);
        for (Index v = 0; v < ds; ++v) {
            CVector ph(da);
            for (Index p = 0; p < da; ++p)
                ph(p) = std::exp(Complex(0.0, lam * alpha(v) * beta(p))) * phi_b(p);
            u.col(v) = vb * ph;
        }
        const CMatrix ru = rt * u;
        const CMatrix gram = (ru.adjoint() * ru).transpose();
        acc += tn * gram.cwiseProduct(tp);
    }

    const CMatrix unnorm = va * acc * va.adjoint();
    const double p = unnorm.trace().real();
    const scheme::ComponentStates ref = s.component_states(t, r, i);
    if (p <= 1e-12 || ref.weight <= 1e-12)
        throw ValidationError("kraus_component_state: cell weight vanishes");
    if (std::abs(p - ref.weight) > 1e-8)
        throw ReconstructionError("kraus_component_state: weight differs between routes");
    const CMatrix out = unnorm / p;
    if (linop::frob(out - ref.object->matrix()) > 1e-8)
        throw ReconstructionError(
            "kraus_component_state: operator-sum and partial-trace routes disagree");
    return quantum::State::trusted(out);
}

MeasurementScheme build_controlled_rotation(double theta) {
    if (theta <= 0.0 || theta > std::numbers::pi + 1e-12)
        throw ValidationError("controlled rotation: angle must lie in (0, pi]");
    CMatrix p1 = CMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    CMatrix y(2, 2);
    y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    CVector ground(2);
    ground << 1.0, 0.0;
    return build_product_scheme(ProductCouplingSpec(p1, -0.5 * theta * y, 1.0),
                                quantum::basis_povm(2),
                                quantum::State::vector_state(ground));
}

MeasurementScheme build_cnot() {
    CMatrix p1 = CMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    CMatrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    CVector ground(2);
    ground << 1.0, 0.0;
    // exp(i (pi/2) P1 (x) (X - I)) = P0 (x) I + P1 (x) X exactly
    return build_product_scheme(
        ProductCouplingSpec(p1, x - linop::identity(2), std::numbers::pi / 2.0),
        quantum::basis_povm(2), quantum::State::vector_state(ground));
}

MeasurementScheme build_shift_model(Index n, const std::vector<int>& eigenvalues) {
    if (eigenvalues.empty())
        throw ValidationError("shift model: at least one eigenvalue required");
    if (n < 2) throw ValidationError("shift model: register size must be at least 2");
    const Index ds = static_cast<Index>(eigenvalues.size());

    std::vector<int> position(eigenvalues.size());
    for (size_t k = 0; k < eigenvalues.size(); ++k) {
        const int ni = static_cast<int>(n);
        position[k] = ((eigenvalues[k] % ni) + ni) % ni;
        for (size_t j = 0; j < k; ++j)
            if (position[j] == position[k])
                throw ValidationError("shift model: eigenvalues alias modulo the register size");
    }

    CMatrix a = CMatrix::Zero(ds, ds);
    for (Index k = 0; k < ds; ++k) a(k, k) = eigenvalues[static_cast<size_t>(k)];

    // generator of the cyclic shift: S = exp(iB) with Fourier spectrum -2*pi*m/n
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    CMatrix f(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index m = 0; m < n; ++m)
            f(j, m) = std::exp(Complex(0.0, step * static_cast<double>(j * m))) /
                      std::sqrt(static_cast<double>(n));
    CMatrix spec = CMatrix::Zero(n, n);
    for (Index m = 0; m < n; ++m) spec(m, m) = -step * static_cast<double>(m);
    CMatrix b = f * spec * f.adjoint();
    b = 0.5 * (b + CMatrix(b.adjoint()));

    const int rest = *std::min_element(eigenvalues.begin(), eigenvalues.end()) - 1;
    std::vector<int> pointer_map(static_cast<size_t>(n), rest);
    for (size_t k = 0; k < eigenvalues.size(); ++k)
        pointer_map[static_cast<size_t>(position[k])] = eigenvalues[k];

    CVector ground = CVector::Zero(n);
    ground(0) = 1.0;
    return build_product_scheme(ProductCouplingSpec(a, b, 1.0), quantum::basis_povm(n),
                                quantum::State::vector_state(ground),
                                std::move(pointer_map));
}

CMatrix ladder(Index n) {
    if (n < 2) throw ValidationError("ladder: dimension must be at least 2");
    CMatrix a = CMatrix::Zero(n, n);
    for (Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

CMatrix position_quadrature(Index n) {
    const CMatrix a = ladder(n);
    return (CMatrix(a.adjoint()) + a) / std::sqrt(2.0);
}

CMatrix momentum_quadrature(Index n) {
    const CMatrix a = ladder(n);
    return Complex(0.0, 1.0) * (CMatrix(a.adjoint()) - a) / std::sqrt(2.0);
}

CVector vacuum_state(Index n) {
    if (n < 1) throw ValidationError("vacuum_state: empty dimension");
    CVector v = CVector::Zero(n);
    v(0) = 1.0;
    return v;
}

CVector coherent_state(Index n, Complex alpha) {
    if (n < 1) throw ValidationError("coherent_state: empty dimension");
    CVector v = CVector::Zero(n);
    v(0) = 1.0;
    for (Index k = 1; k < n; ++k)
        v(k) = v(k - 1) * alpha / std::sqrt(static_cast<double>(k));
    v.normalize();
    return v;
}

CVector squeezed_probe(Index n, double r) {
    if (n < 2) throw ValidationError("squeezed_probe: dimension must be at least 2");
    CVector v = CVector::Zero(n);
    v(0) = 1.0;
    const double t = std::tanh(r);
    for (Index k = 2; k < n; k += 2)
        v(k) = v(k - 2) * t *
               std::sqrt(static_cast<double>(k - 1) / static_cast<double>(k));
    v.normalize();
    return v;
}

void require_truncation_headroom(const CVector& probe, const quantum::State& signal,
                                 double tol) {
    if (signal.dim() != probe.size())
        throw DimensionError("truncation guard: probe and signal dimensions differ");
    const Index top = probe.size() - 1;
    const double probe_top = std::norm(probe(top));
    const double signal_top = signal.matrix()(top, top).real();
    if (probe_top > tol || signal_top > tol)
        throw TruncationError("truncated moments dominated by the top Fock level "
                              "(population " +
                              fmt_mass(std::max(probe_top, signal_top)) + ")");
}

QuadratureModel build_quadrature_model(Index n, double lambda, const CVector& probe,
                                       const quantum::State& signal, Index bins) {
    if (probe.size() != n || signal.dim() != n)
        throw DimensionError("quadrature model: inputs must have the stated dimension");
    // the truncation guard outranks the size floor: a swamped top level makes
    // every other diagnostic meaningless
    require_truncation_headroom(probe, signal);
    if (n < 16) throw ValidationError("quadrature model: truncation must be at least 16");
    if (lambda <= 0.0)
        throw ValidationError("quadrature model: coupling constant must be positive");
    if (bins < 2 || bins > n)
        throw ValidationError("quadrature model: bins must lie in [2, N]");
    if (std::abs(probe.norm() - 1.0) > 1e-10)
        throw ValidationError("quadrature model: probe must be a unit vector");

    CMatrix aq = position_quadrature(n);
    CMatrix bq = position_quadrature(n);
    CMatrix bp = momentum_quadrature(n);

    CMatrix comm = bq * bp - bp * bq -
                   Complex(0.0, 1.0) * linop::identity(n);
    comm.row(n - 1).setZero();
    comm.col(n - 1).setZero();
    const double comm_defect = linop::frob(comm);
    if (comm_defect > 1e-8)
        throw TruncationError(
            "quadrature model: commutator defect extends below the top Fock level");

    linop::HermEig signal_eig = linop::herm_eig(aq);
    linop::HermEig coupling_eig = linop::herm_eig(bq);
    linop::HermEig readout_eig = linop::herm_eig(bp);

    // fine pointer: one spectral cell per readout eigenvalue
    const RVector& y = readout_eig.eigenvalues;
    std::vector<quantum::Interval> intervals(static_cast<size_t>(n));
    std::vector<double> labels(static_cast<size_t>(n));
    for (Index m = 0; m < n; ++m) {
        const double lo = (m == 0) ? y(0) - 1.0 : 0.5 * (y(m - 1) + y(m));
        const double hi = (m == n - 1) ? y(n - 1) + 1.0 : 0.5 * (y(m) + y(m + 1));
        intervals[static_cast<size_t>(m)] = {lo, hi};
        labels[static_cast<size_t>(m)] = y(m);
    }
    quantum::Povm pointer = quantum::spectral_povm(bp, intervals, labels);

    // pointer response per object eigenvalue, and the top-level leakage of
    // the displaced probe
    const CVector probe_q = coupling_eig.eigenvectors.adjoint() * probe;
    RMatrix response(n, n);
    RVector shifted_top(n);
    for (Index k = 0; k < n; ++k) {
        const double ak = signal_eig.eigenvalues(k);
        CVector ph(n);
        for (Index p = 0; p < n; ++p)
            ph(p) = std::exp(Complex(0.0, lambda * ak * coupling_eig.eigenvalues(p))) *
                    probe_q(p);
        const CVector u = coupling_eig.eigenvectors * ph;
        shifted_top(k) = std::norm(u(n - 1));
        const CVector g = readout_eig.eigenvectors.adjoint() * u;
        for (Index m = 0; m < n; ++m) response(m, k) = std::norm(g(m));
    }

    // equal-probability bins under the final pointer distribution of the
    // signal supplied at build time; the initial probe distribution cannot
    // resolve a strongly displaced pointer and would degenerate the binned
    // marginal
    const RVector s = populations_in(signal_eig, signal.matrix());
    const RVector pdist = response * s;
    const double total = pdist.sum();

    std::vector<scheme::ReadingCell> cells(static_cast<size_t>(bins));
    Index m = 0;
    double cum = 0.0;
    for (Index j = 0; j < bins; ++j) {
        auto& cell = cells[static_cast<size_t>(j)];
        if (j == bins - 1) {
            while (m < n) cell.pointer_indices.push_back(static_cast<int>(m++));
        } else {
            // stop at the quantile, but keep one position for every later cell
            const Index reserve_later = bins - 1 - j;
            const double target =
                total * static_cast<double>(j + 1) / static_cast<double>(bins);
            do {
                cell.pointer_indices.push_back(static_cast<int>(m));
                cum += pdist(m);
                ++m;
            } while (m < n - reserve_later && cum < target - 1e-12);
        }
        // probability-median representative, scaled by the pointer function
        double mass = 0.0;
        for (int idx : cell.pointer_indices) mass += pdist(idx);
        double run = 0.0;
        int med = cell.pointer_indices.back();
        for (int idx : cell.pointer_indices) {
            run += pdist(idx);
            if (run >= 0.5 * mass) {
                med = idx;
                break;
            }
        }
        cell.value = y(med) / lambda;
    }
    ReadingScale scale(std::move(cells), static_cast<int>(n));

    std::vector<scheme::ReadingCell> fine_cells(static_cast<size_t>(n));
    for (Index mm = 0; mm < n; ++mm)
        fine_cells[static_cast<size_t>(mm)] = {{static_cast<int>(mm)}, y(mm) / lambda};
    ReadingScale fine_scale(std::move(fine_cells), static_cast<int>(n));

    MeasurementScheme sch = build_product_scheme(
        ProductCouplingSpec(aq, bq, lambda), std::move(pointer),
        quantum::State::vector_state(probe));

    return QuadratureModel{n,
                           lambda,
                           probe,
                           std::move(aq),
                           std::move(bq),
                           std::move(bp),
                           std::move(signal_eig),
                           std::move(coupling_eig),
                           std::move(readout_eig),
                           comm_defect,
                           std::move(response),
                           std::move(shifted_top),
                           std::move(sch),
                           std::move(scale),
                           std::move(fine_scale)};
}

VarianceDecomposition variance_decomposition(const QuadratureModel& m,
                                             const quantum::State& signal) {
    if (signal.dim() != m.n)
        throw DimensionError("variance_decomposition: signal dimension mismatch");
    require_truncation_headroom(m.probe, signal);

    VarianceDecomposition out;
    const RVector s = populations_in(m.signal_eig, signal.matrix());
    const RVector& a = m.signal_eig.eigenvalues;
    const double mu_a = s.dot(a);
    out.var_aq = s.dot(a.cwiseProduct(a)) - mu_a * mu_a;

    const CVector pb = m.readout_eig.eigenvectors.adjoint() * m.probe;
    const RVector w = pb.cwiseAbs2();
    const RVector& y = m.readout_eig.eigenvalues;
    const double mu_p = w.dot(y);
    out.noise_term = (w.dot(y.cwiseProduct(y)) - mu_p * mu_p) / (m.lambda * m.lambda);

    const RVector pm = m.response * s;
    const RVector v = y / m.lambda;
    const double mu_e = pm.dot(v);
    out.var_e = pm.dot(v.cwiseProduct(v)) - mu_e * mu_e;

    out.identity_defect = std::abs(out.var_e - out.var_aq - out.noise_term);
    out.evolved_top_mass = s.dot(m.shifted_top_mass);
    return out;
}

correlate::BivariateDist quadrature_observable_bivariate(const QuadratureModel& m,
                                                         const quantum::State& signal,
                                                         const ReadingScale& r) {
    if (signal.dim() != m.n)
        throw DimensionError("quadrature_observable_bivariate: signal dimension mismatch");
    if (r.n_pointer() != static_cast<int>(m.n))
        throw DimensionError("quadrature_observable_bivariate: scale does not fit");

    // joint mass over (object eigenvalue, readout eigenvalue)
    RMatrix q = RMatrix::Zero(m.n, m.n);
    const linop::HermEig se = linop::herm_eig(signal.matrix());
    for (Index k = 0; k < m.n; ++k) {
        const double wk = se.eigenvalues(k);
        if (wk <= 1e-14) continue;
        const CMatrix coeffs = se.eigenvectors.col(k) * m.probe.transpose();
        const CMatrix evolved = m.scheme.coupling().apply_coeffs(coeffs);
        const CMatrix g = m.signal_eig.eigenvectors.adjoint() * evolved *
                          m.readout_eig.eigenvectors.conjugate();
        q += wk * g.cwiseAbs2();
    }

    const int nc = r.size();
    RMatrix wc = RMatrix::Zero(nc, m.n);
    RMatrix qc = RMatrix::Zero(m.n, nc);
    for (int i = 0; i < nc; ++i)
        for (int idx : r.cell(i).pointer_indices) {
            wc.row(i) += m.response.row(idx);
            qc.col(i) += q.col(idx);
        }
    const RMatrix table = wc * qc;
    return correlate::BivariateDist(r.values(), r.values(), table);
}

correlate::CorrStats quadrature_observable_correlation(const QuadratureModel& m,
                                                       const quantum::State& signal,
                                                       const ReadingScale& r) {
    return correlate::audited_correlation(quadrature_observable_bivariate(m, signal, r));
}

correlate::CorrStats quadrature_value_correlation(const QuadratureModel& m,
                                                  const quantum::State& signal,
                                                  const ReadingScale& r, int i,
                                                  double tol) {
    if (i < 0 || i >= r.size())
        throw ValidationError("quadrature_value_correlation: cell index out of range");
    if (signal.dim() != m.n)
        throw DimensionError("quadrature_value_correlation: signal dimension mismatch");

    RVector w = RVector::Zero(m.n);
    for (int idx : r.cell(i).pointer_indices) w += m.response.row(idx).transpose();
    const RVector s = populations_in(m.signal_eig, signal.matrix());

    correlate::CorrStats st;
    st.eps1 = s.dot(w);
    st.eps2 = st.eps1;
    st.eps12 = s.dot(w.cwiseProduct(w));
    if (st.eps1 <= tol || st.eps1 >= 1.0 - tol)
        throw ValidationError("quadrature_value_correlation: degenerate cell weight");
    const double var = st.eps12 - st.eps1 * st.eps1;
    if (var <= 1e-12)
        throw ValidationError(
            "quadrature_value_correlation: cell effect variance degenerates");
    st.sigma1 = std::sqrt(var);
    st.sigma2 = st.sigma1;
    st.rho = (st.eps12 - st.eps1 * st.eps2) / (st.sigma1 * st.sigma2);
    st.defined = true;
    return st;
}

std::vector<SweepRow> quadrature_correlation_sweep(Index n, const CVector& probe,
                                                   const quantum::State& signal,
                                                   std::span<const double> lambdas,
                                                   Index bins) {
    if (lambdas.empty())
        throw ValidationError("quadrature sweep: at least one lambda required");
    std::vector<SweepRow> rows;
    rows.reserve(lambdas.size());
    for (double lam : lambdas) {
        const QuadratureModel m = build_quadrature_model(n, lam, probe, signal, bins);
        const VarianceDecomposition vd = variance_decomposition(m, signal);
        const correlate::CorrStats obs =
            quadrature_observable_correlation(m, signal, m.fine_scale);
        if (!obs.defined)
            throw ValidationError("quadrature sweep: observable correlation degenerates");
        const correlate::CorrStats val =
            quadrature_value_correlation(m, signal, m.scale, 0);
        rows.push_back(SweepRow{lam, vd.var_aq, vd.noise_term, vd.var_e, obs.rho,
                                val.rho, vd.evolved_top_mass});
    }
    return rows;
}

} // namespace qmlab::models

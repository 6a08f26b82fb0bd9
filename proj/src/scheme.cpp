#include "qmlab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "qmlab/errors.hpp"

namespace qmlab::scheme {

namespace {

// Largest joint dimension for which dense joint-space operators are allowed.
constexpr Index kDenseJointLimit = 2048;

void require_dense_ok(Index dim_joint, const char* what) {
    if (dim_joint > kDenseJointLimit)
        throw DimensionError(std::string(what) +
                             ": joint dimension too large for a dense representation");
}

} // namespace

// ---------------------------------------------------------------------------
// Coupling

Coupling Coupling::unitary(CMatrix u, Index dim_s, Index dim_a, double tol) {
    if (dim_s <= 0 || dim_a <= 0 || u.rows() != dim_s * dim_a || u.cols() != u.rows())
        throw DimensionError("Coupling::unitary: matrix must be (dimS*dimA) square");
    const double defect =
        (u.adjoint() * u - linop::identity(u.rows())).norm();
    if (defect > tol * std::sqrt(static_cast<double>(u.rows())))
        throw ValidationError("Coupling::unitary: U^dag U differs from identity");
    Coupling c;
    c.kind_ = Kind::Unitary;
    c.dim_s_ = dim_s;
    c.dim_a_ = dim_a;
    c.ops_.push_back(std::move(u));
    return c;
}

Coupling Coupling::channel(std::vector<CMatrix> kraus, Index dim_s, Index dim_a,
                           double tol) {
    if (kraus.empty()) throw ValidationError("Coupling::channel: needs Kraus operators");
    const Index d = dim_s * dim_a;
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& k : kraus) {
        if (k.rows() != d || k.cols() != d)
            throw DimensionError("Coupling::channel: Kraus operator dimension mismatch");
        sum += k.adjoint() * k;
    }
    if ((sum - linop::identity(d)).norm() > tol * std::sqrt(static_cast<double>(d)))
        throw ValidationError("Coupling::channel: Kraus operators are not trace preserving");
    Coupling c;
    c.kind_ = Kind::Channel;
    c.dim_s_ = dim_s;
    c.dim_a_ = dim_a;
    c.ops_ = std::move(kraus);
    return c;
}

Coupling Coupling::product(const CMatrix& object_gen, const CMatrix& apparatus_gen,
                           double lambda, double tol) {
    auto ea = linop::herm_eig(object_gen, tol);
    auto eb = linop::herm_eig(apparatus_gen, tol);
    Coupling c;
    c.kind_ = Kind::ProductUnitary;
    c.dim_s_ = object_gen.rows();
    c.dim_a_ = apparatus_gen.rows();
    c.alpha_ = std::move(ea.eigenvalues);
    c.va_ = std::move(ea.eigenvectors);
    c.beta_ = std::move(eb.eigenvalues);
    c.vb_ = std::move(eb.eigenvectors);
    c.lambda_ = lambda;
    return c;
}

const std::vector<CMatrix>& Coupling::kraus() const {
    if (kind_ != Kind::Channel)
        throw ValidationError("Coupling::kraus: not a channel coupling");
    return ops_;
}

const RVector& Coupling::object_eigenvalues() const {
    if (kind_ != Kind::ProductUnitary)
        throw ValidationError("Coupling: factored accessors need a product coupling");
    return alpha_;
}
const CMatrix& Coupling::object_eigenvectors() const {
    if (kind_ != Kind::ProductUnitary)
        throw ValidationError("Coupling: factored accessors need a product coupling");
    return va_;
}
const RVector& Coupling::apparatus_eigenvalues() const {
    if (kind_ != Kind::ProductUnitary)
        throw ValidationError("Coupling: factored accessors need a product coupling");
    return beta_;
}
const CMatrix& Coupling::apparatus_eigenvectors() const {
    if (kind_ != Kind::ProductUnitary)
        throw ValidationError("Coupling: factored accessors need a product coupling");
    return vb_;
}
double Coupling::lambda() const {
    if (kind_ != Kind::ProductUnitary)
        throw ValidationError("Coupling: factored accessors need a product coupling");
    return lambda_;
}

CMatrix Coupling::apply_coeffs(const CMatrix& coeffs) const {
    if (coeffs.rows() != dim_s_ || coeffs.cols() != dim_a_)
        throw DimensionError("Coupling::apply_coeffs: coefficient matrix dimension mismatch");
    switch (kind_) {
    case Kind::Unitary: {
        Eigen::Map<const CVector> vin(coeffs.data(), dim_joint());
        CVector vout = ops_[0] * vin;
        return Eigen::Map<const CMatrix>(vout.data(), dim_s_, dim_a_);
    }
    case Kind::ProductUnitary: {
        CMatrix d = va_.adjoint() * coeffs * vb_.conjugate();
        for (Index k = 0; k < dim_s_; ++k)
            for (Index l = 0; l < dim_a_; ++l)
                d(k, l) *= std::exp(Complex(0.0, lambda_ * alpha_(k) * beta_(l)));
        return va_ * d * vb_.transpose();
    }
    case Kind::Channel:
        break;
    }
    throw ValidationError("Coupling::apply_coeffs: channel couplings have no vector action");
}

CVector Coupling::apply_vector(const CVector& psi) const {
    if (psi.size() != dim_joint())
        throw DimensionError("Coupling::apply_vector: vector dimension mismatch");
    Eigen::Map<const CMatrix> c(psi.data(), dim_s_, dim_a_);
    CMatrix out = apply_coeffs(c);
    return Eigen::Map<const CVector>(out.data(), dim_joint());
}

CMatrix Coupling::apply(const CMatrix& joint) const {
    const Index d = dim_joint();
    if (joint.rows() != d || joint.cols() != d)
        throw DimensionError("Coupling::apply: joint operator dimension mismatch");
    switch (kind_) {
    case Kind::Unitary:
        return ops_[0] * joint * ops_[0].adjoint();
    case Kind::Channel: {
        CMatrix out = CMatrix::Zero(d, d);
        for (const auto& k : ops_) out += k * joint * k.adjoint();
        return out;
    }
    case Kind::ProductUnitary: {
        // U X U^dag via two column passes: M = U X, result = (U M^dag)^dag.
        auto ucols = [&](const CMatrix& x) {
            CMatrix out(d, d);
            for (Index j = 0; j < d; ++j) out.col(j) = apply_vector(x.col(j));
            return out;
        };
        CMatrix m = ucols(joint);
        return ucols(m.adjoint()).adjoint();
    }
    }
    throw ValidationError("Coupling::apply: unreachable");
}

CMatrix Coupling::dense_unitary() const {
    require_dense_ok(dim_joint(), "Coupling::dense_unitary");
    switch (kind_) {
    case Kind::Unitary:
        return ops_[0];
    case Kind::ProductUnitary: {
        CMatrix w = linop::kron(va_, vb_);
        CVector phases(dim_joint());
        for (Index k = 0; k < dim_s_; ++k)
            for (Index l = 0; l < dim_a_; ++l)
                phases(k * dim_a_ + l) =
                    std::exp(Complex(0.0, lambda_ * alpha_(k) * beta_(l)));
        return w * phases.asDiagonal() * w.adjoint();
    }
    case Kind::Channel:
        break;
    }
    throw ValidationError("Coupling::dense_unitary: channel couplings are not unitary");
}

// ---------------------------------------------------------------------------
// ReadingScale

ReadingScale::ReadingScale(std::vector<ReadingCell> cells, int n_pointer_outcomes)
    : cells_(std::move(cells)), n_pointer_(n_pointer_outcomes) {
    if (cells_.empty() || n_pointer_ <= 0)
        throw ValidationError("ReadingScale: needs at least one cell");
    std::vector<char> seen(static_cast<size_t>(n_pointer_), 0);
    for (const auto& c : cells_) {
        if (c.pointer_indices.empty())
            throw ValidationError("ReadingScale: empty cell");
        for (int j : c.pointer_indices) {
            if (j < 0 || j >= n_pointer_)
                throw ValidationError("ReadingScale: pointer index out of range");
            if (seen[static_cast<size_t>(j)]++)
                throw ValidationError("ReadingScale: cells overlap");
        }
    }
    for (char s : seen)
        if (!s) throw ValidationError("ReadingScale: cells do not cover the pointer outcomes");
    for (size_t i = 0; i < cells_.size(); ++i)
        for (size_t j = i + 1; j < cells_.size(); ++j)
            if (std::abs(cells_[i].value - cells_[j].value) <= 1e-12)
                throw ValidationError("ReadingScale: cell values must be pairwise distinct");
}

ReadingScale ReadingScale::finest(const quantum::Povm& pointer) {
    std::vector<ReadingCell> cells;
    cells.reserve(static_cast<size_t>(pointer.size()));
    for (int i = 0; i < pointer.size(); ++i)
        cells.push_back({{i}, pointer.at(i).label});
    return ReadingScale(std::move(cells), pointer.size());
}

RVector ReadingScale::values() const {
    RVector v(size());
    for (int i = 0; i < size(); ++i) v(i) = cells_[static_cast<size_t>(i)].value;
    return v;
}

// ---------------------------------------------------------------------------
// JointState

double JointState::total() const {
    return pure ? coeffs.squaredNorm() : density.trace().real();
}

Complex JointState::expect(const CMatrix& x_s, const CMatrix& x_a) const {
    if (x_s.rows() != dim_s || x_a.rows() != dim_a)
        throw DimensionError("JointState::expect: operator dimension mismatch");
    if (pure)
        return (coeffs.adjoint() * x_s * coeffs * x_a.transpose()).trace();
    return linop::joint_trace_product(density, dim_s, dim_a, x_s, x_a);
}

CMatrix JointState::reduced_object() const {
    if (pure) return coeffs * coeffs.adjoint();
    return linop::partial_trace(density, dim_s, dim_a, linop::Subsystem::Object);
}

CMatrix JointState::reduced_apparatus() const {
    if (pure) return coeffs.transpose() * coeffs.conjugate();
    return linop::partial_trace(density, dim_s, dim_a, linop::Subsystem::Apparatus);
}

CMatrix JointState::dense() const {
    if (!pure) return density;
    require_dense_ok(dim_s * dim_a, "JointState::dense");
    Eigen::Map<const CVector> v(coeffs.data(), dim_s * dim_a);
    return v * v.adjoint();
}

// ---------------------------------------------------------------------------
// MeasurementScheme

MeasurementScheme::MeasurementScheme(Coupling coupling, quantum::State apparatus_state,
                                     quantum::Povm pointer, std::vector<int> pointer_map)
    : coupling_(std::move(coupling)),
      apparatus_state_(std::move(apparatus_state)),
      pointer_(std::move(pointer)),
      pointer_map_(std::move(pointer_map)) {
    if (pointer_.dim() != coupling_.dim_apparatus() ||
        apparatus_state_.dim() != coupling_.dim_apparatus())
        throw DimensionError("MeasurementScheme: apparatus dimensions disagree");
    if (pointer_map_.empty()) {
        pointer_map_.resize(static_cast<size_t>(pointer_.size()));
        for (int i = 0; i < pointer_.size(); ++i) pointer_map_[static_cast<size_t>(i)] = i;
    }
    if (pointer_map_.size() != static_cast<size_t>(pointer_.size()))
        throw ValidationError("MeasurementScheme: pointer function must be total");
}

ReadingScale MeasurementScheme::default_scale() const {
    std::map<int, std::vector<int>> groups;
    for (size_t j = 0; j < pointer_map_.size(); ++j)
        groups[pointer_map_[j]].push_back(static_cast<int>(j));
    std::vector<ReadingCell> cells;
    cells.reserve(groups.size());
    for (auto& [value, idx] : groups)
        cells.push_back({std::move(idx), static_cast<double>(value)});
    return ReadingScale(std::move(cells), pointer_.size());
}

CMatrix MeasurementScheme::cell_effect(const ReadingScale& r, int i) const {
    if (r.n_pointer() != pointer_.size())
        throw DimensionError("cell_effect: reading scale does not match the pointer");
    CMatrix z = CMatrix::Zero(dim_apparatus(), dim_apparatus());
    for (int j : r.cell(i).pointer_indices) z += pointer_.at(j).matrix;
    return z;
}

JointState MeasurementScheme::joint_final(const quantum::State& t) const {
    if (t.dim() != dim_object())
        throw DimensionError("joint_final: input state dimension mismatch");
    JointState out;
    out.dim_s = dim_object();
    out.dim_a = dim_apparatus();
    if (coupling_.is_unitary()) {
        auto phi = t.principal_vector();
        auto chi = apparatus_state_.principal_vector();
        if (phi && chi) {
            out.pure = true;
            CMatrix c0 = (*phi) * chi->transpose();
            out.coeffs = coupling_.apply_coeffs(c0);
            return out;
        }
    }
    require_dense_ok(dim_object() * dim_apparatus(), "joint_final");
    out.pure = false;
    out.density = coupling_.apply(linop::kron(t.matrix(), apparatus_state_.matrix()));
    return out;
}

quantum::State MeasurementScheme::joint_final_state(const quantum::State& t) const {
    return quantum::State::trusted(joint_final(t).dense());
}

quantum::Povm MeasurementScheme::measured_povm(const ReadingScale& r, double tol) const {
    const Index ds = dim_object();
    const Index da = dim_apparatus();
    std::vector<CMatrix> cell_effects;
    cell_effects.reserve(static_cast<size_t>(r.size()));
    for (int i = 0; i < r.size(); ++i) cell_effects.push_back(cell_effect(r, i));

    std::vector<CMatrix> raw(static_cast<size_t>(r.size()),
                             CMatrix::Zero(ds, ds));
    if (coupling_.is_unitary()) {
        // Evolve |k> (x) chi_n for the spectral components chi_n of the
        // apparatus state; E_i(l,k) = sum_n t_n tr[C_{l,n}^dag C_{k,n} Z_i^T].
        auto ta = linop::herm_eig(apparatus_state_.matrix());
        std::vector<double> weights;
        std::vector<Index> keep;
        for (Index n = 0; n < da; ++n)
            if (ta.eigenvalues(n) > 1e-13) {
                weights.push_back(ta.eigenvalues(n));
                keep.push_back(n);
            }
        const size_t rank = keep.size();
        std::vector<std::vector<CMatrix>> evolved(static_cast<size_t>(ds));
        for (Index k = 0; k < ds; ++k) {
            evolved[static_cast<size_t>(k)].reserve(rank);
            for (size_t n = 0; n < rank; ++n) {
                CMatrix c0 = CMatrix::Zero(ds, da);
                c0.row(k) = ta.eigenvectors.col(keep[n]).transpose();
                evolved[static_cast<size_t>(k)].push_back(coupling_.apply_coeffs(c0));
            }
        }
        for (int i = 0; i < r.size(); ++i) {
            const CMatrix zt = cell_effects[static_cast<size_t>(i)].transpose();
            CMatrix& e = raw[static_cast<size_t>(i)];
            for (Index k = 0; k < ds; ++k)
                for (size_t n = 0; n < rank; ++n) {
                    const CMatrix g = evolved[static_cast<size_t>(k)][n] * zt;
                    for (Index l = 0; l < ds; ++l)
                        e(l, k) += weights[n] *
                                   (evolved[static_cast<size_t>(l)][n].conjugate()
                                        .cwiseProduct(g))
                                       .sum();
                }
        }
    } else {
        require_dense_ok(ds * da, "measured_povm");
        const CMatrix id_s = linop::identity(ds);
        for (Index k = 0; k < ds; ++k)
            for (Index l = 0; l < ds; ++l) {
                CMatrix unit = CMatrix::Zero(ds, ds);
                unit(k, l) = 1.0;
                const CMatrix ev =
                    coupling_.apply(linop::kron(unit, apparatus_state_.matrix()));
                for (int i = 0; i < r.size(); ++i)
                    raw[static_cast<size_t>(i)](l, k) = linop::joint_trace_product(
                        ev, ds, da, id_s, cell_effects[static_cast<size_t>(i)]);
            }
    }

    try {
        std::vector<quantum::Effect> effects;
        effects.reserve(raw.size());
        for (int i = 0; i < r.size(); ++i)
            effects.emplace_back(std::move(raw[static_cast<size_t>(i)]),
                                 r.cell(i).value, tol);
        return quantum::Povm(std::move(effects), tol);
    } catch (const ValidationError& e) {
        throw ReconstructionError(
            std::string("measured_povm: reconstructed effects fail POVM validity (") +
            e.what() + ")");
    }
}

CMatrix MeasurementScheme::conditioned_joint(const quantum::State& t,
                                             const ReadingScale& r, int i) const {
    require_dense_ok(dim_object() * dim_apparatus(), "conditioned_joint");
    const JointState joint = joint_final(t);
    const CMatrix rt = linop::psd_sqrt(cell_effect(r, i));
    if (joint.pure) {
        const CMatrix ci = joint.coeffs * rt.transpose();
        Eigen::Map<const CVector> v(ci.data(), joint.dim_s * joint.dim_a);
        return v * v.adjoint();
    }
    return linop::apparatus_sandwich(joint.density, joint.dim_s, joint.dim_a, rt);
}

MeasurementScheme::CellData
MeasurementScheme::cell_data(const JointState& joint, const CMatrix& cell_eff) const {
    CellData out;
    const CMatrix rt = linop::psd_sqrt(cell_eff);
    if (joint.pure) {
        const CMatrix ci = joint.coeffs * rt.transpose();
        out.weight = ci.squaredNorm();
        out.object_unnorm = ci * ci.adjoint();
        out.apparatus_unnorm = ci.transpose() * ci.conjugate();
    } else {
        out.object_unnorm = linop::reduce_object_with_apparatus_op(
            joint.density, joint.dim_s, joint.dim_a, cell_eff);
        // R_A of the conditioned joint collapses to R rho_A R: apparatus-side
        // factors pass through the object trace.
        const CMatrix rho_a = joint.reduced_apparatus();
        out.apparatus_unnorm = rt * rho_a * rt;
        out.weight = out.object_unnorm.trace().real();
    }
    return out;
}

ComponentStates MeasurementScheme::component_states(const quantum::State& t,
                                                    const ReadingScale& r, int i,
                                                    double weight_tol) const {
    const JointState joint = joint_final(t);
    CellData cd = cell_data(joint, cell_effect(r, i));
    ComponentStates out;
    out.cell = i;
    out.weight = std::max(cd.weight, 0.0);
    if (cd.weight > weight_tol) {
        out.object = quantum::State::trusted(cd.object_unnorm / cd.weight);
        out.apparatus = quantum::State::trusted(cd.apparatus_unnorm / cd.weight);
    }
    return out;
}

std::vector<ComponentStates>
MeasurementScheme::all_components(const quantum::State& t, const ReadingScale& r,
                                  double weight_tol) const {
    const JointState joint = joint_final(t);
    std::vector<ComponentStates> out;
    out.reserve(static_cast<size_t>(r.size()));
    for (int i = 0; i < r.size(); ++i) {
        CellData cd = cell_data(joint, cell_effect(r, i));
        ComponentStates cs;
        cs.cell = i;
        cs.weight = std::max(cd.weight, 0.0);
        if (cd.weight > weight_tol) {
            cs.object = quantum::State::trusted(cd.object_unnorm / cd.weight);
            cs.apparatus = quantum::State::trusted(cd.apparatus_unnorm / cd.weight);
        }
        out.push_back(std::move(cs));
    }
    return out;
}

CMatrix MeasurementScheme::object_component_unnormalized(const JointState& joint,
                                                         const CMatrix& cell_eff) const {
    if (joint.pure) return joint.coeffs * cell_eff.transpose() * joint.coeffs.adjoint();
    return linop::reduce_object_with_apparatus_op(joint.density, joint.dim_s,
                                                  joint.dim_a, cell_eff);
}

CMatrix MeasurementScheme::instrument_apply(const CMatrix& cell_eff,
                                            const CMatrix& x) const {
    const Index d = dim_object();
    if (x.rows() != d || x.cols() != d)
        throw DimensionError("instrument_apply: input dimension mismatch");
    if (coupling_.is_unitary()) {
        auto chi = apparatus_state_.principal_vector();
        if (chi) {
            // spectral route: evolve each input eigenvector against the
            // apparatus vector; equals conditioning the dense joint
            auto eig = linop::herm_eig(x, 1e-8);
            CMatrix out = CMatrix::Zero(d, d);
            for (Index k = 0; k < d; ++k) {
                const double w = eig.eigenvalues(k);
                if (std::abs(w) < 1e-15) continue;
                CMatrix c = coupling_.apply_coeffs(eig.eigenvectors.col(k) *
                                                   chi->transpose());
                out += w * (c * cell_eff.transpose() * c.adjoint());
            }
            return out;
        }
    }
    require_dense_ok(d * dim_apparatus(), "instrument_apply");
    const CMatrix joint = coupling_.apply(linop::kron(x, apparatus_state_.matrix()));
    return linop::reduce_object_with_apparatus_op(joint, d, dim_apparatus(), cell_eff);
}

AdditivityReport MeasurementScheme::check_object_additivity(const quantum::State& t,
                                                            const ReadingScale& r,
                                                            double tol) const {
    const JointState joint = joint_final(t);
    CMatrix sum = CMatrix::Zero(dim_object(), dim_object());
    for (int i = 0; i < r.size(); ++i)
        sum += object_component_unnormalized(joint, cell_effect(r, i));
    AdditivityReport rep;
    rep.residual = (joint.reduced_object() - sum).norm();
    rep.ok = rep.residual <= tol;
    return rep;
}

ValueDefinitenessReport MeasurementScheme::check_pointer_value_definiteness(
    const quantum::State& t, const ReadingScale& r, double tol) const {
    const JointState joint = joint_final(t);
    ValueDefinitenessReport rep;
    for (int i = 0; i < r.size(); ++i) {
        const CMatrix zc = cell_effect(r, i);
        CellData cd = cell_data(joint, zc);
        if (cd.weight <= tol) continue;
        const CMatrix ta = cd.apparatus_unnorm / cd.weight;
        ValueDefinitenessReport::Cell cell;
        cell.cell = i;
        cell.weight = cd.weight;
        cell.prob_defect = std::abs((ta * zc).trace().real() - 1.0);
        cell.eigen_defect = (zc * ta - ta).norm();
        cell.ok = cell.prob_defect <= tol && cell.eigen_defect <= tol;
        rep.worst_prob_defect = std::max(rep.worst_prob_defect, cell.prob_defect);
        rep.worst_eigen_defect = std::max(rep.worst_eigen_defect, cell.eigen_defect);
        rep.all_ok = rep.all_ok && cell.ok;
        rep.cells.push_back(cell);
    }
    return rep;
}

MixtureReport MeasurementScheme::check_pointer_mixture(const quantum::State& t,
                                                       const ReadingScale& r,
                                                       double tol) const {
    const JointState joint = joint_final(t);
    CMatrix sum = CMatrix::Zero(dim_apparatus(), dim_apparatus());
    for (int i = 0; i < r.size(); ++i)
        sum += cell_data(joint, cell_effect(r, i)).apparatus_unnorm;
    MixtureReport rep;
    rep.residual = (joint.reduced_apparatus() - sum).norm();
    rep.ok = rep.residual <= tol;
    return rep;
}

OrthogonalityReport MeasurementScheme::check_component_orthogonality(
    const quantum::State& t, const ReadingScale& r, double tol) const {
    const JointState joint = joint_final(t);
    std::vector<CMatrix> states;
    std::vector<int> idx;
    for (int i = 0; i < r.size(); ++i) {
        CellData cd = cell_data(joint, cell_effect(r, i));
        if (cd.weight > 1e-12) {
            states.push_back(cd.object_unnorm / cd.weight);
            idx.push_back(i);
        }
    }
    OrthogonalityReport rep;
    rep.table = RMatrix::Zero(r.size(), r.size());
    for (size_t a = 0; a < states.size(); ++a)
        for (size_t b = 0; b < states.size(); ++b) {
            const double v = (states[a] * states[b]).trace().real();
            rep.table(idx[a], idx[b]) = v;
            if (a != b && v > rep.worst_off_diagonal) rep.worst_off_diagonal = v;
        }
    rep.ok = rep.worst_off_diagonal <= tol;
    return rep;
}

} // namespace qmlab::scheme

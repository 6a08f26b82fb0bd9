#include "qmlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmlab/errors.hpp"

namespace qmlab::quantum {

namespace {

double scale_of(const CMatrix& m) { return std::max(1.0, m.norm()); }

void check_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ValidationError(std::string(what) + ": operator must be square and non-empty");
}

} // namespace

State::State(CMatrix m, double tol) : m_(std::move(m)) {
    check_square(m_, "State");
    const double s = scale_of(m_);
    if ((m_ - m_.adjoint()).norm() > tol * s)
        throw ValidationError("State: not Hermitian within tolerance");
    m_ = 0.5 * (m_ + m_.adjoint().eval());
    if (std::abs(m_.trace().real() - 1.0) > tol || std::abs(m_.trace().imag()) > tol)
        throw ValidationError("State: trace differs from 1 beyond tolerance");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol * s)
        throw ValidationError("State: negative eigenvalue beyond tolerance");
}

State State::trusted(CMatrix m, double tol) {
    check_square(m, "State");
    const double s = scale_of(m);
    if ((m - m.adjoint()).norm() > tol * s)
        throw ValidationError("State: not Hermitian within tolerance");
    CMatrix h = 0.5 * (m + m.adjoint().eval());
    if (std::abs(h.trace().real() - 1.0) > tol || std::abs(h.trace().imag()) > tol)
        throw ValidationError("State: trace differs from 1 beyond tolerance");
    return State(std::move(h), Trusted{});
}

State State::vector_state(const CVector& v, double tol) {
    const double n = v.norm();
    if (v.size() == 0 || std::abs(n - 1.0) > tol)
        throw ValidationError("vector_state: vector must have unit norm");
    CVector u = v / n;
    return State((u * u.adjoint()).eval(), Trusted{});
}

std::optional<CVector> State::principal_vector(double tol) const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_);
    const Index top = m_.rows() - 1; // ascending order
    if (es.eigenvalues()(top) < 1.0 - tol) return std::nullopt;
    CVector v = es.eigenvectors().col(top);
    // Deterministic phase: largest-magnitude component made real positive.
    Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex p = v(imax) / std::abs(v(imax));
    return CVector(v / p);
}

Effect::Effect(CMatrix m, double lab, double tol) : matrix(std::move(m)), label(lab) {
    check_square(matrix, "Effect");
    const double s = scale_of(matrix);
    if ((matrix - matrix.adjoint()).norm() > tol * s)
        throw ValidationError("Effect: not Hermitian within tolerance");
    matrix = 0.5 * (matrix + matrix.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol * s)
        throw ValidationError("Effect: negative eigenvalue beyond tolerance");
    if (es.eigenvalues().maxCoeff() > 1.0 + tol * s)
        throw ValidationError("Effect: eigenvalue exceeds 1 beyond tolerance");
}

Povm::Povm(std::vector<Effect> effects, double tol) : effects_(std::move(effects)) {
    if (effects_.empty()) throw ValidationError("Povm: needs at least one effect");
    dim_ = effects_.front().matrix.rows();
    CMatrix sum = CMatrix::Zero(dim_, dim_);
    for (const auto& e : effects_) {
        if (e.matrix.rows() != dim_)
            throw DimensionError("Povm: effects have mismatched dimensions");
        sum += e.matrix;
    }
    if ((sum - linop::identity(dim_)).norm() > tol * std::max(1.0, std::sqrt(double(dim_))))
        throw ValidationError("Povm: effects do not sum to the identity");
    for (size_t i = 0; i < effects_.size(); ++i)
        for (size_t j = i + 1; j < effects_.size(); ++j)
            if (std::abs(effects_[i].label - effects_[j].label) <= 1e-12)
                throw ValidationError("Povm: outcome labels must be pairwise distinct");
}

double prob(const State& t, const Effect& e) {
    if (t.dim() != e.matrix.rows())
        throw DimensionError("prob: state and effect dimensions differ");
    const Complex tr = (t.matrix() * e.matrix).trace();
    const double p = tr.real();
    if (std::abs(tr.imag()) > 1e-10 || p < -1e-12 || p > 1.0 + 1e-12)
        throw ValidationError("prob: tr(TE) outside [0,1] beyond tolerance");
    return std::clamp(p, 0.0, 1.0);
}

RVector outcome_distribution(const State& t, const Povm& povm) {
    RVector out(povm.size());
    for (int i = 0; i < povm.size(); ++i) out(i) = prob(t, povm.at(i));
    if (std::abs(out.sum() - 1.0) > 1e-10)
        throw ValidationError("outcome_distribution: probabilities do not sum to 1");
    return out;
}

SharpnessReport is_sharp(const Povm& povm, double tol) {
    SharpnessReport rep;
    rep.idempotency_defects.reserve(static_cast<size_t>(povm.size()));
    for (int i = 0; i < povm.size(); ++i) {
        const CMatrix& e = povm.at(i).matrix;
        const double d = (e * e - e).norm();
        rep.idempotency_defects.push_back(d);
        rep.worst_idempotency = std::max(rep.worst_idempotency, d);
        for (int j = 0; j < povm.size(); ++j) {
            if (i == j) continue;
            rep.worst_cross = std::max(rep.worst_cross, (e * povm.at(j).matrix).norm());
        }
    }
    rep.sharp = rep.worst_idempotency <= tol && rep.worst_cross <= tol;
    return rep;
}

Povm spectral_povm(const CMatrix& h, std::span<const Interval> cells,
                   std::span<const double> labels, double tol) {
    if (cells.size() != labels.size() || cells.empty())
        throw ValidationError("spectral_povm: need one label per interval");
    for (const auto& c : cells)
        if (!(c.lo < c.hi) && !(c.lo == c.hi))
            throw ValidationError("spectral_povm: interval with lo > hi");
    // Interior overlap check on the sorted-by-lo order.
    std::vector<size_t> order(cells.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return cells[a].lo < cells[b].lo; });
    for (size_t k = 1; k < order.size(); ++k)
        if (cells[order[k]].lo < cells[order[k - 1]].hi - tol)
            throw ValidationError("spectral_povm: interval interiors overlap");

    const auto eig = linop::herm_eig(h, tol);
    const Index d = h.rows();
    std::vector<CMatrix> parts(cells.size(), CMatrix::Zero(d, d));
    const double eps = 1e-12 * std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
    for (Index k = 0; k < d; ++k) {
        const double x = eig.eigenvalues(k);
        // Covering interval with the largest lower edge: half-open at shared
        // edges, closed at the top of the range.
        int best = -1;
        for (size_t c = 0; c < cells.size(); ++c) {
            if (cells[c].lo <= x + eps && x <= cells[c].hi + eps) {
                if (best < 0 || cells[c].lo > cells[static_cast<size_t>(best)].lo)
                    best = static_cast<int>(c);
            }
        }
        if (best < 0)
            throw ValidationError("spectral_povm: eigenvalue " + std::to_string(x) +
                                  " not covered by any interval");
        const CVector v = eig.eigenvectors.col(k);
        parts[static_cast<size_t>(best)] += v * v.adjoint();
    }
    std::vector<Effect> effects;
    effects.reserve(cells.size());
    for (size_t c = 0; c < cells.size(); ++c)
        effects.emplace_back(std::move(parts[c]), labels[c], tol);
    return Povm(std::move(effects), tol);
}

Povm basis_povm(Index d) {
    std::vector<Effect> effects;
    effects.reserve(static_cast<size_t>(d));
    for (Index i = 0; i < d; ++i) {
        CMatrix p = CMatrix::Zero(d, d);
        p(i, i) = 1.0;
        effects.emplace_back(std::move(p), static_cast<double>(i));
    }
    return Povm(std::move(effects));
}

} // namespace qmlab::quantum

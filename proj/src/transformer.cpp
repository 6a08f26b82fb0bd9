#include "qmlab/transformer.hpp"

#include <cmath>

#include "qmlab/random.hpp"

namespace qmlab::transformer {

Verdict classify_defect(double defect, double tol) {
    if (defect <= tol) return Verdict::Holds;
    if (defect <= 10.0 * tol) return Verdict::Inconclusive;
    return Verdict::Fails;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Fails: return "fails";
    }
    return "?";
}

namespace {

void merge(Verdict& into, Verdict v) {
    if (static_cast<int>(v) > static_cast<int>(into)) into = v;
}

} // namespace

StateTransformer::StateTransformer(const scheme::MeasurementScheme& s,
                                   scheme::ReadingScale scale)
    : scheme_(s), scale_(std::move(scale)),
      observable_(s.measured_povm(scale_)) {
    cell_effects_.reserve(static_cast<size_t>(scale_.size()));
    for (int i = 0; i < scale_.size(); ++i)
        cell_effects_.push_back(scheme_.cell_effect(scale_, i));
}

CMatrix StateTransformer::apply_raw(int i, const CMatrix& t) const {
    return scheme_.instrument_apply(cell_effects_.at(static_cast<size_t>(i)), t);
}

CMatrix StateTransformer::apply(int i, const quantum::State& t) const {
    return apply_raw(i, t.matrix());
}

std::vector<CMatrix> StateTransformer::apply_all(const quantum::State& t) const {
    std::vector<CMatrix> out;
    out.reserve(static_cast<size_t>(size()));
    for (int i = 0; i < size(); ++i) out.push_back(apply(i, t));
    return out;
}

FirstKindReport check_first_kind(const StateTransformer& st,
                                 std::span<const quantum::State> states, double tol) {
    FirstKindReport rep;
    for (size_t si = 0; si < states.size(); ++si) {
        const auto parts = st.apply_all(states[si]);
        CMatrix final_state = CMatrix::Zero(parts[0].rows(), parts[0].cols());
        for (const auto& p : parts) final_state += p;
        for (int i = 0; i < st.size(); ++i) {
            const double before =
                (states[si].matrix() * st.observable().at(i).matrix).trace().real();
            const double after =
                (final_state * st.observable().at(i).matrix).trace().real();
            const double dev = std::abs(before - after);
            if (dev > rep.max_deviation) {
                rep.max_deviation = dev;
                rep.worst_cell = i;
                rep.worst_state = static_cast<int>(si);
            }
        }
    }
    rep.verdict = classify_defect(rep.max_deviation, tol);
    return rep;
}

RepeatReport check_repeatable(const StateTransformer& st,
                              std::span<const quantum::State> states, double tol) {
    RepeatReport rep;
    rep.cell_defects.assign(static_cast<size_t>(st.size()), 0.0);
    for (const auto& t : states) {
        for (int i = 0; i < st.size(); ++i) {
            const CMatrix it = st.apply(i, t);
            const double w = it.trace().real();
            if (w <= tol) continue; // unreachable reading: nothing to repeat
            const CMatrix& e = st.observable().at(i).matrix;
            const double prob_defect = std::abs((it * e).trace().real() / w - 1.0);
            const double eigen_defect = (e * it - it).norm() / w;
            rep.worst_prob_defect = std::max(rep.worst_prob_defect, prob_defect);
            rep.worst_eigen_defect = std::max(rep.worst_eigen_defect, eigen_defect);
            rep.cell_defects[static_cast<size_t>(i)] =
                std::max(rep.cell_defects[static_cast<size_t>(i)],
                         std::max(prob_defect, eigen_defect));
        }
    }
    merge(rep.verdict, classify_defect(rep.worst_prob_defect, tol));
    merge(rep.verdict, classify_defect(rep.worst_eigen_defect, tol));
    return rep;
}

ComposeReport check_repeat_composition(const StateTransformer& st,
                                       std::span<const quantum::State> states,
                                       double tol) {
    ComposeReport rep;
    for (const auto& t : states) {
        for (int j = 0; j < st.size(); ++j) {
            const CMatrix ij = st.apply(j, t);
            const double wj = ij.trace().real();
            for (int i = 0; i < st.size(); ++i) {
                const double twice = st.apply_raw(i, ij).trace().real();
                const double expect = (i == j) ? wj : 0.0;
                rep.worst_defect = std::max(rep.worst_defect, std::abs(twice - expect));
            }
        }
    }
    rep.verdict = classify_defect(rep.worst_defect, tol);
    return rep;
}

std::vector<quantum::State> hermitian_basis_states(Index d) {
    std::vector<quantum::State> out;
    out.reserve(static_cast<size_t>(d * d));
    for (Index k = 0; k < d; ++k) {
        CVector v = CVector::Zero(d);
        v(k) = 1.0;
        out.push_back(quantum::State::vector_state(v));
    }
    const double r = 1.0 / std::sqrt(2.0);
    for (Index k = 0; k < d; ++k)
        for (Index l = k + 1; l < d; ++l) {
            CVector v = CVector::Zero(d);
            v(k) = r;
            v(l) = r;
            out.push_back(quantum::State::vector_state(v));
            v(l) = Complex(0.0, r);
            out.push_back(quantum::State::vector_state(v));
        }
    return out;
}

std::vector<quantum::State> test_state_set(Index d, int n_random, std::uint64_t seed) {
    std::vector<quantum::State> out = hermitian_basis_states(d);
    rng::Stream s(seed);
    for (int i = 0; i < n_random; ++i) out.push_back(rng::random_state(d, s));
    return out;
}

} // namespace qmlab::transformer

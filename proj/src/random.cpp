#include "qmlab/random.hpp"

#include <cmath>

namespace qmlab::rng {

double Stream::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Stream::gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]: keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::acos(-1.0) * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Complex Stream::cgauss() {
    const double re = gauss();
    const double im = gauss();
    return Complex(re, im) / std::sqrt(2.0);
}

CMatrix haar_unitary(Index d, Stream& s) {
    CMatrix g(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) g(i, j) = s.cgauss();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    CMatrix q = qr.householderQ();
    Eigen::VectorXcd diag = qr.matrixQR().diagonal();
    // absorb the R-diagonal phases so the distribution is exactly Haar
    for (Index j = 0; j < d; ++j) {
        const double a = std::abs(diag(j));
        q.col(j) *= (a > 0.0) ? diag(j) / a : Complex(1.0, 0.0);
    }
    return q;
}

CVector random_unit_vector(Index d, Stream& s) {
    CVector v(d);
    for (Index i = 0; i < d; ++i) v(i) = s.cgauss();
    return v.normalized();
}

quantum::State random_state(Index d, Stream& s) {
    CMatrix g(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) g(i, j) = s.cgauss();
    CMatrix w = g * g.adjoint();
    return quantum::State(w / w.trace());
}

quantum::State random_vector_state(Index d, Stream& s) {
    return quantum::State::vector_state(random_unit_vector(d, s));
}

} // namespace qmlab::rng

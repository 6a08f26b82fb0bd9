#pragma once

#include <cstdint>
#include <random>

#include "qmlab/linop.hpp"
#include "qmlab/quantum.hpp"

namespace qmlab::rng {

/// Deterministic random stream. The engine is the standard mt19937_64 (whose
/// raw output is specified exactly); the uniform and Gaussian transforms are
/// written out here rather than taken from <random>'s distributions, whose
/// algorithms vary between standard libraries. A seed therefore produces the
/// same sequence everywhere.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    /// Standard normal via Box-Muller; pairs are cached.
    double gauss();

    /// Standard complex normal: E|z|^2 = 1.
    Complex cgauss();

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phase
/// convention fixed by the R diagonal.
CMatrix haar_unitary(Index d, Stream& s);

CVector random_unit_vector(Index d, Stream& s);

/// Full-rank random density matrix: G G^dag / tr (Wishart-type).
quantum::State random_state(Index d, Stream& s);

quantum::State random_vector_state(Index d, Stream& s);

} // namespace qmlab::rng

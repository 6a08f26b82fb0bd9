#pragma once

#include <cmath>

#include "qmlab/linop.hpp"

namespace testutil {

using qmlab::CMatrix;
using qmlab::Complex;
using qmlab::CVector;

inline CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline CVector ket(int i, int dim) {
    CVector v = CVector::Zero(dim);
    v(i) = 1.0;
    return v;
}

// rank-one projector |v><v| / <v|v>
inline CMatrix proj(const CVector& v) { return v * v.adjoint() / v.squaredNorm(); }

inline double matdist(const CMatrix& a, const CMatrix& b) { return (a - b).norm(); }

} // namespace testutil

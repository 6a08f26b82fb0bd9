#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/linop.hpp"

using namespace qmlab;
using namespace testutil;

TEST_CASE("kron follows the (object, apparatus) index convention") {
    CMatrix a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 5, 6, 7, 8;
    CMatrix k = linop::kron(a, b);
    REQUIRE(k.rows() == 4);
    // entry ((s,a),(t,b)) = A(s,t) B(a,b); joint row index = s*dimA + a
    CHECK(k(0, 0) == Complex(5));
    CHECK(k(0, 2) == Complex(10));
    CHECK(k(1, 2) == Complex(14)); // A(0,1) B(1,0)
    CHECK(k(3, 1) == Complex(24)); // A(1,0) B(1,1)
    CHECK(k(2, 3) == Complex(24)); // A(1,1) B(0,1)
}

TEST_CASE("partial trace of a product factorizes and preserves trace") {
    CMatrix a(2, 2), b(3, 3);
    a << Complex(1, 0), Complex(0, 2), Complex(0, -2), Complex(3, 0);
    b.setZero();
    b(0, 0) = 2;
    b(1, 1) = 1;
    b(2, 2) = 1;
    b(0, 1) = Complex(0, 1);
    b(1, 0) = Complex(0, -1);
    CMatrix j = linop::kron(a, b);
    CHECK(matdist(linop::partial_trace(j, 2, 3, linop::Subsystem::Object), a * b.trace()) < 1e-12);
    CHECK(matdist(linop::partial_trace(j, 2, 3, linop::Subsystem::Apparatus), b * a.trace()) < 1e-12);
    CHECK(std::abs(linop::partial_trace(j, 2, 3, linop::Subsystem::Object).trace() - j.trace()) < 1e-12);
}

TEST_CASE("partial trace of the Bell state is maximally mixed") {
    CVector bell = (ket(0, 4) + ket(3, 4)) / std::sqrt(2.0);
    CMatrix rho = bell * bell.adjoint();
    CMatrix red = linop::partial_trace(rho, 2, 2, linop::Subsystem::Object);
    CHECK(matdist(red, 0.5 * linop::identity(2)) < 1e-14);
}

TEST_CASE("herm_eig orders eigenvalues ascending and reconstructs") {
    CMatrix h(2, 2);
    h << 1, Complex(0, -2), Complex(0, 2), -1;
    auto e = linop::herm_eig(h);
    CHECK(e.eigenvalues(0) == doctest::Approx(-std::sqrt(5.0)));
    CHECK(e.eigenvalues(1) == doctest::Approx(std::sqrt(5.0)));
    CMatrix rec = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() *
                  e.eigenvectors.adjoint();
    CHECK(matdist(rec, h) < 1e-12);
    CHECK_THROWS_AS(linop::herm_eig(pauli_x() + CMatrix::Constant(2, 2, Complex(0, 1e-3))),
                    ValidationError);
}

TEST_CASE("psd_sqrt squares back and rejects indefinite input") {
    CMatrix p(2, 2);
    p << 4, 0, 0, 9;
    CMatrix r = linop::psd_sqrt(p);
    CHECK(r(0, 0) == Complex(2));
    CHECK(r(1, 1) == Complex(3));
    CMatrix pr = proj((ket(0, 2) + ket(1, 2)).eval());
    CHECK(matdist(linop::psd_sqrt(pr), pr) < 1e-12); // projectors are their own root
    CHECK_THROWS_AS(linop::psd_sqrt(pauli_z()), ValidationError);
}

TEST_CASE("expm_i_herm of an involution gives cos + i sin") {
    const double pi = std::acos(-1.0);
    CMatrix h = linop::kron(pauli_z(), pauli_y()); // squares to identity
    CHECK(matdist(linop::expm_i_herm(h, pi), -linop::identity(4)) < 1e-12);
    CMatrix half = linop::expm_i_herm(h, pi / 2.0);
    CHECK(matdist(half, Complex(0, 1) * h) < 1e-12);
    CMatrix u = linop::expm_i_herm(h, 0.37);
    CHECK(matdist(u * u.adjoint(), linop::identity(4)) < 1e-12);
}

TEST_CASE("schmidt decomposition: frozen coefficients for an entangled pair") {
    // (sqrt2|00> + |10> + |11>)/2
    CVector v(4);
    v << std::sqrt(2.0) / 2.0, 0.0, 0.5, 0.5;
    auto s = linop::schmidt(v, 2, 2);
    REQUIRE(s.coefficients.size() == 2);
    CHECK(s.coefficients(0) * s.coefficients(0) == doctest::Approx(0.853553390593).epsilon(1e-10));
    CHECK(s.coefficients(1) * s.coefficients(1) == doctest::Approx(0.146446609407).epsilon(1e-10));
    // reconstruct v = sum_k c_k left_k (x) right_k
    CVector rec = CVector::Zero(4);
    for (Index k = 0; k < s.coefficients.size(); ++k)
        for (Index i = 0; i < 2; ++i)
            for (Index j = 0; j < 2; ++j)
                rec(i * 2 + j) += s.coefficients(k) * s.left(i, k) * s.right(j, k);
    CHECK((rec - v).norm() < 1e-10);
}

TEST_CASE("schmidt of a product vector has a single coefficient") {
    CVector a(2), b(3);
    a << Complex(0.6, 0), Complex(0, 0.8);
    b << 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), Complex(0, -1.0 / std::sqrt(3.0));
    CVector v(6);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 3; ++j) v(i * 3 + j) = a(i) * b(j);
    auto s = linop::schmidt(v, 2, 3);
    REQUIRE(s.coefficients.size() == 1);
    CHECK(s.coefficients(0) == doctest::Approx(1.0));
}

TEST_CASE("support_projection spans exactly the nonzero eigenspace") {
    CMatrix p = 0.3 * proj(ket(0, 3)) + 0.7 * proj(ket(2, 3));
    CMatrix s = linop::support_projection(p);
    CHECK(matdist(s * s, s) < 1e-12);
    CHECK(std::abs(s.trace().real() - 2.0) < 1e-12);
    CHECK(matdist(s * p, p) < 1e-12);
}

TEST_CASE("apparatus_sandwich matches the dense kron route") {
    CMatrix m(2, 2);
    m << Complex(0.3, 0.1), Complex(0.2, 0), Complex(0, -0.4), Complex(0.9, 0);
    CVector v(4);
    v << 0.5, Complex(0.1, 0.3), Complex(0, 0.6), 0.2;
    CMatrix j = v * v.adjoint();
    CMatrix expect = linop::kron(linop::identity(2), m) * j *
                     linop::kron(linop::identity(2), m).adjoint();
    CHECK(matdist(linop::apparatus_sandwich(j, 2, 2, m), expect) < 1e-12);
}

TEST_CASE("joint_trace_product and reduce_object_with_apparatus_op match dense") {
    CMatrix xs = pauli_x() + 0.5 * pauli_z();
    CMatrix xa(3, 3);
    xa.setZero();
    xa(0, 1) = Complex(0, 1);
    xa(1, 0) = Complex(0, -1);
    xa(2, 2) = 2.0;
    CVector v(6);
    v << 0.1, Complex(0.2, 0.2), 0.3, Complex(0, 0.4), 0.5, Complex(0.6, -0.1);
    CMatrix j = v * v.adjoint();
    Complex direct = (j * linop::kron(xs, xa)).trace();
    CHECK(std::abs(linop::joint_trace_product(j, 2, 3, xs, xa) - direct) < 1e-12);
    CMatrix red = linop::reduce_object_with_apparatus_op(j, 2, 3, xa);
    CMatrix expect =
        linop::partial_trace(j * linop::kron(linop::identity(2), xa), 2, 3, linop::Subsystem::Object);
    CHECK(matdist(red, expect) < 1e-12);
}

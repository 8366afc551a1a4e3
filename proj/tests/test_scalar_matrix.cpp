#include "doctest.h"

#include "qcduality/matrix.hpp"
#include "qcduality/sampling.hpp"
#include "qcduality/scalar.hpp"

#include <random>

using namespace qcd;

TEST_CASE("QSqrt2 field arithmetic") {
  QSqrt2 r2 = QSqrt2::sqrt2();
  CHECK(r2 * r2 == QSqrt2(2));
  QSqrt2 x(Rational(3, 4), Rational(-1, 5));
  QSqrt2 y(Rational(-2), Rational(7, 3));
  CHECK((x * y) / y == x);
  CHECK((x + y) - y == x);
  CHECK((x / x) == QSqrt2(1));
  CHECK(QSqrt2(Rational(1, 2)).is_rational());
  CHECK_FALSE(r2.is_rational());
  CHECK(r2.to_double() == doctest::Approx(1.4142135623730951));
  CHECK_THROWS_AS(x / QSqrt2(0), Error);
}

TEST_CASE("parse_rational reads fractions, integers and decimals exactly") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-12") == Rational(-12));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("2e-3") == Rational(1, 500));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational("1/0"));
}

TEST_CASE("Jet arithmetic truncates at second order") {
  using J = Jet<QSqrt2>;
  J e(QSqrt2(0), QSqrt2(1), QSqrt2(0));
  J one(QSqrt2(1));
  J x = one + e;
  J inv = one / x;  // 1 - e + e^2
  CHECK(inv.c0 == QSqrt2(1));
  CHECK(inv.c1 == QSqrt2(-1));
  CHECK(inv.c2 == QSqrt2(1));
  J cube = e * e * e;
  CHECK(is_zero(cube));
}

TEST_CASE("inverse, solve and determinant in exact arithmetic") {
  RationalSampler s(11);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix<QSqrt2> a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = s.next_q();
    if (is_zero(determinant(a))) continue;
    CHECK(a * inverse(a) == Matrix<QSqrt2>::identity(4));
    std::vector<QSqrt2> b{s.next_q(), s.next_q(), s.next_q(), s.next_q()};
    auto x = solve(a, b);
    for (std::size_t i = 0; i < 4; ++i) {
      QSqrt2 acc(0);
      for (std::size_t j = 0; j < 4; ++j) acc += a(i, j) * x[j];
      CHECK(acc == b[i]);
    }
  }
  Matrix<QSqrt2> sing(2, 2);
  sing(0, 0) = QSqrt2(1);
  sing(0, 1) = QSqrt2(2);
  sing(1, 0) = QSqrt2(2);
  sing(1, 1) = QSqrt2(4);
  CHECK(is_zero(determinant(sing)));
  CHECK_THROWS_AS(inverse(sing), Error);
}

TEST_CASE("characteristic polynomial equals det(A - lambda I) at random points") {
  RationalSampler s(5);
  for (std::size_t n : {0u, 1u, 2u, 5u, 7u}) {
    Matrix<QSqrt2> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = s.next_q() + (j % 2 ? QSqrt2::sqrt2() : QSqrt2(0));
    auto p = characteristic_polynomial(a);
    CHECK(p.size() == n + 1);
    CHECK(p[n] == QSqrt2(n % 2 ? -1 : 1));
    for (int t = 0; t < 3; ++t) {
      QSqrt2 lam = s.next_q();
      Matrix<QSqrt2> shifted = a;
      for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lam;
      CHECK(p(lam) == determinant(shifted));
    }
  }
}

TEST_CASE("empty matrix conventions") {
  Matrix<QSqrt2> e(0, 0);
  CHECK(determinant(e) == QSqrt2(1));
  auto p = characteristic_polynomial(e);
  CHECK(p.size() == 1);
  CHECK(p[0] == QSqrt2(1));
}

TEST_CASE("float characteristic polynomial of a nilpotent matrix") {
  Matrix<Complex> a(3, 3);
  a(0, 1) = 1.0;
  a(1, 2) = 2.0;
  auto p = characteristic_polynomial(a);
  CHECK(std::abs(p[3] + 1.0) < 1e-15);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(p[k]) < 1e-15);
}

TEST_CASE("polynomial helpers") {
  Polynomial<QSqrt2> p(std::vector<QSqrt2>{QSqrt2(1), QSqrt2(2), QSqrt2(3)});  // 1 + 2x + 3x^2
  CHECK(p.degree() == 2);
  CHECK(p(QSqrt2(2)) == QSqrt2(17));
  CHECK(p.derivative()(QSqrt2(1)) == QSqrt2(8));
  auto q = p * p;
  CHECK(q(QSqrt2(2)) == QSqrt2(289));
  CHECK(exactly_equal(q - q, Polynomial<QSqrt2>()));
}

#include "doctest.h"

#include "qcduality/factorize.hpp"
#include "qcduality/sampling.hpp"

using namespace qcd;
using namespace qcd::factorize;

TEST_CASE("kit for C, N=1") {
  std::vector<QSqrt2> q{QSqrt2(Rational(3, 2))};
  auto kit = build_kit<QSqrt2>(q, RootSystem::C);
  CHECK(kit.d0(0, 0) == QSqrt2(3));
  CHECK(kit.d0(1, 1) == QSqrt2(-3));
  CHECK(kit.v(0, 0) == QSqrt2(1));
  CHECK(kit.v(0, 1) == QSqrt2(Rational(3, 2)));
  CHECK(kit.v(1, 1) == QSqrt2(Rational(-3, 2)));
  CHECK(kit.c0(0, 1) == QSqrt2(1));
  CHECK(kit.ctilde(0, 1) == QSqrt2(1));

  QSqrt2 h(Rational(2, 5)), xi(Rational(1, 3));
  auto l = factorized_lax<QSqrt2>(q, RootSystem::C, xi, h);
  QSqrt2 f = h * xi / q[0];
  CHECK(l(0, 0) == f);
  CHECK(l(0, 1) == f);
  CHECK(l(1, 0) == -f);
  CHECK(l(1, 1) == -f);
}

TEST_CASE("kit for B, N=1") {
  QSqrt2 q1(Rational(-5, 3));
  std::vector<QSqrt2> q{q1};
  auto kit = build_kit<QSqrt2>(q, RootSystem::B);
  CHECK(kit.d0(0, 0) == QSqrt2::sqrt2() * q1 * q1);
  CHECK(kit.d0(1, 1) == QSqrt2::sqrt2() * q1 * q1);
  CHECK(kit.d0(2, 2) == -q1 * q1);
  CHECK(kit.v(2, 0) == QSqrt2(1));
  CHECK(kit.v(2, 1) == QSqrt2(0));
  CHECK(kit.v(0, 2) == q1 * q1);
  CHECK(kit.v(1, 2) == q1 * q1);
  CHECK(kit.c0(1, 2) == QSqrt2(2));
  CHECK(kit.ctilde(0, 1) == QSqrt2(1));
  CHECK(kit.ctilde(1, 2) == QSqrt2(0));
}

TEST_CASE("generalized Vandermonde is invertible for admissible points") {
  RationalSampler s(41);
  for (auto kind : {RootSystem::B, RootSystem::C}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      auto kit = build_kit<QSqrt2>(s.admissible(n), kind);
      CHECK_FALSE(is_zero(determinant(kit.v)));
    }
  }
}

TEST_CASE("special velocities") {
  std::vector<QSqrt2> q{QSqrt2(1), QSqrt2(3)};
  QSqrt2 h(2);
  auto d = special_velocities<QSqrt2>(q, RootSystem::D, QSqrt2(0), h);
  CHECK(d[0] == h / QSqrt2(-2) + h / QSqrt2(4));
  auto b = special_velocities<QSqrt2>(q, RootSystem::B, QSqrt2(0), h);
  CHECK(b[0] == QSqrt2(2) * h + h / QSqrt2(-2) + h / QSqrt2(4));
  auto c = special_velocities<QSqrt2>(q, RootSystem::C, QSqrt2(Rational(1, 2)), h);
  CHECK(c[1] == QSqrt2(Rational(1, 2)) * h / QSqrt2(3) + h / QSqrt2(2) + h / QSqrt2(4));
}

TEST_CASE("factorization holds exactly for random rational inputs") {
  RationalSampler s(2024);
  const Rational xis[] = {Rational(0), Rational(1, 2), Rational(1), Rational(-1, 3), Rational(7, 4)};
  int checked = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto kind : {RootSystem::B, RootSystem::C, RootSystem::D}) {
      for (const auto& xr : xis) {
        if (kind != RootSystem::C && xr != 0) continue;
        auto q = s.admissible(n);
        QSqrt2 h = s.next_q();
        auto r = factorization_residual<QSqrt2>(q, kind, QSqrt2(xr), h);
        CAPTURE(to_string(kind));
        CAPTURE(n);
        CHECK(r.exact);
        CHECK(r.exact_zero);
        ++checked;
      }
    }
  }
  CHECK(checked == 4 * 7);
}

TEST_CASE("special Lax matrix is nilpotent") {
  RationalSampler s(77);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto kind : {RootSystem::B, RootSystem::C, RootSystem::D}) {
      auto q = s.admissible(n);
      QSqrt2 xi = kind == RootSystem::C ? s.next_q() : QSqrt2(0);
      auto l = special_lax<QSqrt2>(q, kind, xi, s.next_q());
      auto p = characteristic_polynomial(l);
      const std::size_t size = l.rows();
      for (std::size_t k = 0; k < size; ++k) CHECK(is_zero(p[k]));
      Matrix<QSqrt2> pw = Matrix<QSqrt2>::identity(size);
      for (std::size_t k = 0; k < size; ++k) pw = pw * l;
      CHECK(pw.is_zero());
    }
  }
}

TEST_CASE("factorization in floating point") {
  std::vector<Complex> q{Complex(0.7, 0.1), Complex(1.9, -0.3), Complex(3.1, 0.0)};
  auto r = factorization_residual<Complex>(q, RootSystem::C, Complex(0.25, 0.5), Complex(1.0, 0.2));
  CHECK_FALSE(r.exact);
  CHECK(r.max_abs < 1e-10);
}

TEST_CASE("wrong nilpotent mix breaks the factorization") {
  std::vector<QSqrt2> q{QSqrt2(2), QSqrt2(5)};
  QSqrt2 h(1), xi(Rational(1, 3));
  auto kit = build_kit<QSqrt2>(q, RootSystem::C);
  Matrix<QSqrt2> core = kit.c0 - kit.ctilde;  // the D combination, wrong unless xi = 0
  Matrix<QSqrt2> d0inv(4, 4);
  for (std::size_t i = 0; i < 4; ++i) d0inv(i, i) = QSqrt2(1) / kit.d0(i, i);
  auto wrong = h * (d0inv * kit.v * core * inverse(kit.v) * kit.d0);
  CHECK_FALSE((special_lax<QSqrt2>(q, RootSystem::C, xi, h) - wrong).is_zero());
}

TEST_CASE("A has no factorization kit") {
  std::vector<QSqrt2> q{QSqrt2(1)};
  CHECK_THROWS_AS(build_kit<QSqrt2>(q, RootSystem::A), Error);
}

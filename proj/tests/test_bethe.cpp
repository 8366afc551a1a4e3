#include "doctest.h"

#include "qcduality/bethe.hpp"
#include "qcduality/sampling.hpp"

#include <random>

using namespace qcd;
using namespace qcd::bethe;

namespace {

BetheSystem<Complex> boundary_c(std::vector<Complex> z, Complex xi, Complex hbar = 1.0) {
  return {BetheKind::BoundaryC, std::move(z), xi, hbar};
}

bool contains_root(const SolveReport& rep, BetheKind kind, std::vector<Complex> mu, double tol = 1e-9) {
  for (const auto& s : rep.states)
    if (root_set_distance(kind, s.mu, mu) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("boundary Gaudin eigenvalues, small cases") {
  QSqrt2 xi(Rational(3, 5)), h(Rational(7, 2)), z1(Rational(4, 3));
  std::vector<QSqrt2> z{z1}, none;
  CHECK(gaudin_eigs_boundary<QSqrt2>(z, none, xi, h)[0] == xi * h / z1);
  CHECK(gaudin_eigs_b<QSqrt2>(z, none, h)[0] == QSqrt2(2) * h / z1);

  std::vector<QSqrt2> z2{QSqrt2(1), QSqrt2(2)};
  CHECK(gaudin_eigs_boundary<QSqrt2>(z2, none, xi, QSqrt2(1))[0] == xi - QSqrt2(Rational(2, 3)));

  // swapped argument sets give the dual-side eigenvalue
  QSqrt2 q1(Rational(2, 3)), q2(Rational(5, 7)), mu(Rational(-9, 4));
  std::vector<QSqrt2> q{q1, q2}, muv{mu};
  QSqrt2 one_minus = QSqrt2(1) - xi;
  QSqrt2 expect = h * (one_minus / mu - QSqrt2(1) / (mu - q1) - QSqrt2(1) / (mu + q1) - QSqrt2(1) / (mu - q2) -
                       QSqrt2(1) / (mu + q2));
  CHECK(gaudin_eigs_boundary<QSqrt2>(muv, q, one_minus, h)[0] == expect);

  // B: the E1 form and the formal xi = 2 boundary formula
  std::vector<QSqrt2> qb{q1};
  CHECK(gaudin_eigs_b<QSqrt2>(qb, muv, h)[0] == QSqrt2(2) * h / q1 - h / (q1 - mu) - h / (q1 + mu));
  CHECK(gaudin_eigs_b<QSqrt2>(q, muv, h) == gaudin_eigs_boundary<QSqrt2>(q, muv, QSqrt2(2), h));
}

TEST_CASE("Gaudin eigenvalues: term-level oracle") {
  RationalSampler s(8);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 4;
    auto z = s.admissible(n);
    auto mu = s.admissible_with(z, 1 + t % 2);
    QSqrt2 xi = s.next_q(), h = s.next_q();
    std::vector<QSqrt2> none;
    auto h0 = gaudin_eigs_boundary<QSqrt2>(z, none, xi, h);
    auto hm = gaudin_eigs_boundary<QSqrt2>(z, mu, xi, h);
    for (std::size_t i = 0; i < n; ++i) {
      QSqrt2 expect0 = xi / z[i];
      for (std::size_t k = 0; k < n; ++k)
        if (k != i) expect0 += QSqrt2(1) / (z[i] - z[k]) + QSqrt2(1) / (z[i] + z[k]);
      CHECK(h0[i] == h * expect0);
      QSqrt2 drop(0);
      for (const auto& m : mu) drop += QSqrt2(1) / (z[i] - m) + QSqrt2(1) / (z[i] + m);
      CHECK(h0[i] - hm[i] == h * drop);
    }
  }
}

TEST_CASE("A-type Gaudin eigenvalues") {
  QSqrt2 w(3), h(1);
  std::vector<QSqrt2> z{QSqrt2(0), QSqrt2(2)}, mu{QSqrt2(1)};
  auto e = gaudin_eigs_a<QSqrt2>(z, mu, w, h);
  CHECK(e[0] == w + QSqrt2(Rational(-1, 2)) + QSqrt2(1));
  CHECK(e[1] == w + QSqrt2(Rational(1, 2)) + QSqrt2(-1));
}

TEST_CASE("pole collisions") {
  std::vector<Complex> z{1.0, 2.0}, mu{1.0};
  CHECK_THROWS_AS(gaudin_eigs_boundary<Complex>(z, mu, 0.0, 1.0), Error);
  auto sys = boundary_c(z, 0.0);
  std::vector<Complex> zero{0.0};
  try {
    bethe_residual<Complex>(sys, zero);
    FAIL("expected a pole collision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleCollision);
  }
}

TEST_CASE("Bethe residual: closed-form on-shell points") {
  using Q = QSqrt2;
  std::vector<Q> z{Q(1), Q(2)};
  BetheSystem<Q> c{BetheKind::BoundaryC, z, Q(0), Q(1)};
  std::vector<Q> mu{Q::sqrt2()};
  CHECK(is_zero(bethe_residual<Q>(c, mu)[0]));
  std::vector<Q> off{Q(Rational(3, 2))};
  CHECK_FALSE(is_zero(bethe_residual<Q>(c, off)[0]));

  std::vector<Complex> zb{1.0, 2.0}, mub{std::sqrt(2.5)};
  BetheSystem<Complex> b{BetheKind::BoundaryB, zb, 0.0, 1.0};
  CHECK(std::abs(bethe_residual<Complex>(b, mub)[0]) < 1e-14);

  // D with general rational z: mu^2 = z1 z2
  RationalSampler s(4);
  for (int t = 0; t < 10; ++t) {
    Rational a = s.next(), r = s.next();
    a = abs(a);
    r = abs(r) + 1;  // z2 = a r^2 so that z1 z2 = (a r)^2
    std::vector<Q> zz{Q(a), Q(Rational(a * r * r))};
    std::vector<Q> root{Q(Rational(a * r))};
    BetheSystem<Q> d{BetheKind::BoundaryC, zz, Q(0), Q(1)};
    CHECK(is_zero(bethe_residual<Q>(d, root)[0]));
  }
}

TEST_CASE("Bethe residual: A-type two-site example") {
  // 2w + h(1/(mu-z1) + 1/(mu-z2)) with z = (0, 2), mu = 1 -> 2w
  using Q = QSqrt2;
  BetheSystem<Q> a{BetheKind::ATwisted, {Q(0), Q(2)}, Q(Rational(1, 3)), Q(5)};
  std::vector<Q> mu{Q(1)};
  CHECK(bethe_residual<Q>(a, mu)[0] == Q(Rational(2, 3)));
}

TEST_CASE("sign symmetry of boundary residuals") {
  RationalSampler s(19);
  for (auto kind : {BetheKind::BoundaryB, BetheKind::BoundaryC}) {
    for (int t = 0; t < 10; ++t) {
      auto z = s.admissible(3);
      auto mu = s.admissible_with(z, 2);
      BetheSystem<QSqrt2> sys{kind, z, s.next_q(), s.next_q()};
      auto r = bethe_residual<QSqrt2>(sys, mu);
      auto flipped = mu;
      flipped[1] = -flipped[1];
      auto rf = bethe_residual<QSqrt2>(sys, flipped);
      CHECK(rf[0] == r[0]);
      CHECK(rf[1] == -r[1]);
    }
  }
}

TEST_CASE("Jacobian: closed forms and symmetry") {
  using Q = QSqrt2;
  Q xi(Rational(1, 3)), m1(Rational(5, 2)), m2(Rational(-7, 3));
  std::vector<Q> z{Q(1), Q(3)};
  BetheSystem<Q> c{BetheKind::BoundaryC, z, xi, Q(1)};
  std::vector<Q> one{m1};
  Q expect = -Q(2) * (xi - Q(1)) / (m1 * m1);
  for (const auto& zk : z) expect -= Q(1) / ((m1 - zk) * (m1 - zk)) + Q(1) / ((m1 + zk) * (m1 + zk));
  CHECK(bethe_jacobian<Q>(c, one)(0, 0) == expect);

  std::vector<Q> two{m1, m2};
  auto j = bethe_jacobian<Q>(c, two);
  CHECK(j(0, 1) == j(1, 0));
  CHECK(j(0, 1) == Q(2) / ((m1 + m2) * (m1 + m2)) - Q(2) / ((m1 - m2) * (m1 - m2)));
}

TEST_CASE("Jacobian matches central differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 3.0), ph(-0.4, 0.4);
  int checked = 0;
  for (auto kind : {BetheKind::ATwisted, BetheKind::BoundaryB, BetheKind::BoundaryC}) {
    for (int t = 0; t < 10; ++t) {
      std::vector<Complex> z{u(rng), u(rng) + 3.0, u(rng) + 6.0};
      std::vector<Complex> mu{Complex(u(rng), ph(rng)), Complex(u(rng) + 3.0, ph(rng))};
      BetheSystem<Complex> sys{kind, z, Complex(u(rng), ph(rng)), Complex(u(rng), 0.0)};
      auto j = bethe_jacobian<Complex>(sys, mu);
      for (std::size_t b = 0; b < mu.size(); ++b) {
        const double h = 1e-6;
        auto mp = mu, mm = mu;
        mp[b] += h;
        mm[b] -= h;
        auto rp = bethe_residual<Complex>(sys, mp);
        auto rm = bethe_residual<Complex>(sys, mm);
        for (std::size_t g = 0; g < mu.size(); ++g) {
          Complex fd = (rp[g] - rm[g]) / (2.0 * h);
          CHECK(std::abs(fd - j(g, b)) <= 1e-7 * std::max(1.0, std::abs(j(g, b))));
        }
      }
      ++checked;
    }
  }
  CHECK(checked == 30);
}

TEST_CASE("solver: C, N=2, xi=0 finds mu^2 = +-z1 z2") {
  auto sys = boundary_c({1.0, 2.0}, 0.0);
  auto rep = solve_bethe(sys, 1, SolveOptions{.seed_count = 32, .jobs = 1});
  CHECK(contains_root(rep, BetheKind::BoundaryC, {std::sqrt(2.0)}));
  CHECK(contains_root(rep, BetheKind::BoundaryC, {Complex(0.0, std::sqrt(2.0))}));
  for (const auto& s : rep.states) {
    CHECK(s.converged);
    CHECK(s.residual_norm <= rep.tolerance);
    CHECK(s.jacobian_condition > 0.0);
    CHECK(std::isfinite(s.jacobian_condition));
    CHECK(canonicalize(BetheKind::BoundaryC, s.mu) == s.mu);
  }
  CHECK(rep.attempts == 32);
  CHECK(rep.converged_seeds + rep.diverged_seeds + rep.stalled_seeds == rep.attempts);
}

TEST_CASE("solver: C, N=2, xi=1/2 matches the quadratic 3u^2 - 5u - 4") {
  auto rep = solve_bethe(boundary_c({1.0, 2.0}, 0.5), 1, SolveOptions{.seed_count = 32, .jobs = 1});
  const double disc = std::sqrt(25.0 + 48.0);
  for (double u : {(5.0 + disc) / 6.0, (5.0 - disc) / 6.0})
    CHECK(contains_root(rep, BetheKind::BoundaryC, {std::sqrt(Complex(u, 0.0))}));
  for (const auto& s : rep.states) {
    Complex u = s.mu[0] * s.mu[0];
    CHECK(std::abs(3.0 * u * u - 5.0 * u - 4.0) < 1e-9);
  }
}

TEST_CASE("solver: B, N=2 finds mu^2 = (z1^2 + z2^2)/2") {
  BetheSystem<Complex> sys{BetheKind::BoundaryB, {1.0, 2.0}, 0.0, 1.0};
  auto rep = solve_bethe(sys, 1, SolveOptions{.seed_count = 32, .jobs = 1});
  CHECK(contains_root(rep, BetheKind::BoundaryB, {std::sqrt(2.5)}));
}

TEST_CASE("solver: output independent of worker count") {
  auto sys = boundary_c({1.0, 2.5, 4.0}, 0.5, Complex(1.0, 0.0));
  auto a = solve_bethe(sys, 1, SolveOptions{.seed_count = 24, .rng_seed = 9, .jobs = 1});
  auto b = solve_bethe(sys, 1, SolveOptions{.seed_count = 24, .rng_seed = 9, .jobs = 3});
  nlohmann::json ja = a, jb = b;
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("solver: M=0 and range checks") {
  auto sys = boundary_c({1.0, 2.0}, 0.0);
  auto rep = solve_bethe(sys, 0);
  REQUIRE(rep.states.size() == 1);
  CHECK(rep.states[0].mu.empty());
  CHECK_THROWS_AS(solve_bethe(sys, 2), Error);
  CHECK_THROWS_AS(solve_bethe(sys, -1), Error);
}

TEST_CASE("solver: A-type two sites") {
  BetheSystem<Complex> sys{BetheKind::ATwisted, {0.0, 1.0}, 0.7, 1.0};
  auto rep = solve_bethe(sys, 1, SolveOptions{.seed_count = 16, .jobs = 1});
  REQUIRE_FALSE(rep.states.empty());
  // 2w + h/mu + h/(mu-1) = 0 is a quadratic with two roots
  CHECK(rep.states.size() == 2);
  for (const auto& s : rep.states) CHECK(std::abs(bethe_residual<Complex>(sys, s.mu)[0]) < 1e-10);
}

TEST_CASE("solver: N=4, M=2 states are genuine roots") {
  auto sys = boundary_c({1.0, 2.0, 3.5, 5.0}, 0.0);
  auto rep = solve_bethe(sys, 2, SolveOptions{.seed_count = 64, .jobs = 1});
  CHECK(rep.states.size() >= 2);
  for (const auto& s : rep.states) {
    auto r = bethe_residual<Complex>(sys, s.mu);
    for (auto v : r) CHECK(std::abs(v) <= rep.tolerance);
  }
  for (std::size_t i = 0; i < rep.states.size(); ++i)
    for (std::size_t k = i + 1; k < rep.states.size(); ++k)
      CHECK(root_set_distance(BetheKind::BoundaryC, rep.states[i].mu, rep.states[k].mu) > rep.deduplication_radius);
}

TEST_CASE("canonicalization and distances") {
  auto c = canonicalize(BetheKind::BoundaryC, {Complex(-2.0, 1.0), Complex(0.0, -1.0)});
  CHECK(c[0] == Complex(0.0, 1.0));
  CHECK(c[1] == Complex(2.0, -1.0));
  std::vector<Complex> a{1.0, 2.0}, b{-2.0, 1.0};
  CHECK(root_set_distance(BetheKind::BoundaryC, a, b) == 0.0);
  CHECK(root_set_distance(BetheKind::ATwisted, a, b) == doctest::Approx(3.0));
  CHECK(is_singular(BetheKind::BoundaryC, std::vector<Complex>{1.0, -1.0}));
  CHECK(is_singular(BetheKind::BoundaryC, std::vector<Complex>{0.0}));
  CHECK_FALSE(is_singular(BetheKind::ATwisted, std::vector<Complex>{0.0, 1.0}));
}

TEST_CASE("high-precision refinement") {
  auto sys = boundary_c({1.0, 2.0}, 0.0);
  std::vector<Complex> mu{std::sqrt(2.0) * (1.0 + 1e-9)};
  auto hp = refine_high_precision(sys, mu);
  HPComplex target(boost::multiprecision::sqrt(HPReal(2)), HPReal(0));
  CHECK(static_cast<double>(boost::multiprecision::abs(HPComplex(hp[0] - target))) < 1e-30);
}

TEST_CASE("JSON layout") {
  BetheState s;
  s.mu = {Complex(1.0, 2.0)};
  s.residual_norm = 1e-14;
  s.seed_id = 3;
  nlohmann::json j = s;
  CHECK(j["mu"][0][0] == 1.0);
  CHECK(j["mu"][0][1] == 2.0);
  CHECK(j["seed_id"] == 3);
  CHECK(j.contains("residual"));
}

#include "doctest.h"

#include "qcduality/model.hpp"

#include <random>

using namespace qcd;

TEST_CASE("preset couplings per root system") {
  auto b = preset_couplings<QSqrt2>(RootSystem::B, QSqrt2(1), QSqrt2(5));
  CHECK(b.g1 == QSqrt2::sqrt2());
  CHECK(b.g2 == QSqrt2(1));
  CHECK(b.g4 == QSqrt2(0));

  auto c = preset_couplings<QSqrt2>(RootSystem::C, QSqrt2(1), QSqrt2(Rational(1, 2)));
  CHECK(c.g1 == QSqrt2(0));
  CHECK(c.g2 == QSqrt2(1));
  CHECK(c.g4 == QSqrt2(Rational(0), Rational(1, 2)));

  auto d = preset_couplings<QSqrt2>(RootSystem::D, QSqrt2(2), QSqrt2(0));
  CHECK(d.g1 == QSqrt2(0));
  CHECK(d.g2 == QSqrt2(2));
  CHECK(d.g4 == QSqrt2(0));

  auto a = preset_couplings<QSqrt2>(RootSystem::A, QSqrt2(3), QSqrt2(0));
  CHECK(a.kind == RootSystem::A);
  CHECK(a.g2 == QSqrt2(3));

  CHECK_THROWS_AS(preset_couplings<QSqrt2>(RootSystem::C, QSqrt2(0), QSqrt2(1)), Error);
}

TEST_CASE("validate_couplings") {
  Couplings<QSqrt2> ok{RootSystem::B, QSqrt2::sqrt2(), QSqrt2(1), QSqrt2(0)};
  CHECK(validate_couplings(ok) == 0.0);
  Couplings<QSqrt2> g1zero{RootSystem::C, QSqrt2(0), QSqrt2(1), QSqrt2(7)};
  CHECK_NOTHROW(validate_couplings(g1zero));
  Couplings<QSqrt2> bad{RootSystem::B, QSqrt2(1), QSqrt2(0), QSqrt2(0)};
  try {
    validate_couplings(bad);
    FAIL("expected ConstraintViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstraintViolated);
    REQUIRE(e.residual().has_value());
    CHECK(*e.residual() == doctest::Approx(1.0));
  }
  Couplings<Complex> fbad{RootSystem::B, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(validate_couplings(fbad), Error);
  Couplings<Complex> fok{RootSystem::B, std::sqrt(2.0), 1.0, 0.0};
  CHECK_NOTHROW(validate_couplings(fok));
}

TEST_CASE("presets always satisfy the coupling constraint") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    Complex hbar(u(rng), u(rng));
    Complex xi(u(rng), u(rng));
    if (std::abs(hbar) < 1e-3) continue;
    for (auto kind : {RootSystem::A, RootSystem::B, RootSystem::C, RootSystem::D})
      CHECK_NOTHROW(validate_couplings(preset_couplings<Complex>(kind, hbar, xi)));
  }
  for (long h = 1; h <= 5; ++h)
    for (long x = -3; x <= 3; ++x)
      for (auto kind : {RootSystem::B, RootSystem::C, RootSystem::D})
        CHECK(validate_couplings(preset_couplings<QSqrt2>(kind, QSqrt2(Rational(h, 3)), QSqrt2(Rational(x, 2)))) == 0.0);
}

TEST_CASE("lax sizes") {
  CHECK(lax_size(RootSystem::A, 3) == 3);
  CHECK(lax_size(RootSystem::B, 3) == 7);
  CHECK(lax_size(RootSystem::C, 3) == 6);
  CHECK(lax_size(RootSystem::D, 3) == 6);
}

TEST_CASE("ModelSpec rejects inadmissible inhomogeneities") {
  CHECK_NOTHROW(make_model(RootSystem::C, {1.0, 2.0}, 1, 0.5, 1.0));
  CHECK_THROWS_AS(make_model(RootSystem::C, {1.0, -1.0}, 0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(make_model(RootSystem::C, {1.0, 1.0}, 0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(make_model(RootSystem::C, {0.0, 1.0}, 0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(make_model(RootSystem::C, {1.0, 2.0}, 2, 0.0, 1.0), Error);
  CHECK_THROWS_AS(make_model(RootSystem::D, {1.0, 2.0}, 0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(make_model(RootSystem::C, {1.0, 2.0}, 0, 0.0, 0.0), Error);
  // A tolerates opposite and zero coordinates
  CHECK_NOTHROW(make_model(RootSystem::A, {0.0, 1.0, -1.0}, 1, 0.0, 1.0, 0.5));
  try {
    make_model(RootSystem::B, {1.0, -1.0}, 0, 0.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoincidingCoordinates);
  }
  try {
    make_model(RootSystem::B, {0.0, 1.0}, 0, 0.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroCoordinate);
  }
}

TEST_CASE("ModelSpec JSON round trip") {
  auto spec = make_model(RootSystem::C, {Complex(1.0, 0.0), Complex(2.5, -0.25)}, 1, 0.5, Complex(1.0, 0.5));
  nlohmann::json j = spec;
  CHECK(j.contains("root_system"));
  CHECK(j["z"][1][1].get<double>() == -0.25);
  ModelSpec back = j.get<ModelSpec>();
  CHECK(back.root_system == spec.root_system);
  CHECK(back.n == spec.n);
  CHECK(back.m == spec.m);
  CHECK(back.z == spec.z);
  CHECK(back.xi == spec.xi);
  CHECK(back.hbar == spec.hbar);
  nlohmann::json again = back;
  CHECK(again.dump() == j.dump());
}

TEST_CASE("complex parsing") {
  CHECK(parse_complex("1.5") == Complex(1.5, 0.0));
  CHECK(parse_complex("1+2i") == Complex(1.0, 2.0));
  CHECK(parse_complex("1-2i") == Complex(1.0, -2.0));
  CHECK(parse_complex("-3i") == Complex(0.0, -3.0));
  CHECK(parse_complex("i") == Complex(0.0, 1.0));
  CHECK(parse_complex("1e-3+2e1i") == Complex(1e-3, 20.0));
  CHECK_THROWS(parse_complex("x"));
  CHECK(complex_from_json(nlohmann::json::array({1.0, -2.0})) == Complex(1.0, -2.0));
  CHECK(complex_from_json(nlohmann::json("2-i")) == Complex(2.0, -1.0));
  CHECK(complex_from_json(nlohmann::json(3.0)) == Complex(3.0, 0.0));
}

#pragma once

// Configuration types shared by the classical and quantum sides: root-system
// tags, Calogero-Moser couplings, and the model specification.

#include "qcduality/errors.hpp"
#include "qcduality/scalar.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace qcd {

enum class RootSystem { A, B, C, D };

std::string to_string(RootSystem kind);
RootSystem parse_root_system(std::string_view text);

/// Lax size for N particles: N (A), 2N+1 (B), 2N (C, D).
std::size_t lax_size(RootSystem kind, std::size_t n);

template <class S>
struct Couplings {
  RootSystem kind = RootSystem::C;
  S g1{}, g2{}, g4{};
};

/// g1 (g1^2 - 2 g2^2 + sqrt2 g2 g4); must vanish for the Lax representation.
template <class S>
S coupling_constraint(const Couplings<S>& c) {
  S g1sq = c.g1 * c.g1;
  return c.g1 * (g1sq - from_int<S>(2) * c.g2 * c.g2 + sqrt2<S>() * c.g2 * c.g4);
}

/// Throws ConstraintViolated (carrying the residual) when the coupling
/// constraint fails: exactly in exact mode, beyond 1e-12 max(1,|g|^3) otherwise.
/// Returns the residual magnitude on success.
template <class S>
double validate_couplings(const Couplings<S>& c) {
  if (c.kind == RootSystem::A) return 0.0;
  S r = coupling_constraint(c);
  double mag = magnitude(r);
  bool ok = false;
  if constexpr (is_exact_v<S>) {
    ok = is_zero(r);
  } else {
    double g = std::max({magnitude(c.g1), magnitude(c.g2), magnitude(c.g4)});
    ok = mag <= 1e-12 * std::max(1.0, g * g * g);
  }
  if (!ok) throw Error(ErrorCode::ConstraintViolated, "coupling constraint violated", mag);
  return mag;
}

/// Coupling presets for the classical root systems:
/// B (sqrt2 h, h, 0), C (0, h, sqrt2 h xi), D (0, h, 0); A carries g = h in g2.
template <class S>
Couplings<S> preset_couplings(RootSystem kind, const S& hbar, const S& xi) {
  if (is_zero(hbar)) throw Error(ErrorCode::InvalidArgument, "hbar must be nonzero");
  Couplings<S> c;
  c.kind = kind;
  c.g1 = from_int<S>(0);
  c.g2 = hbar;
  c.g4 = from_int<S>(0);
  switch (kind) {
    case RootSystem::B:
      c.g1 = sqrt2<S>() * hbar;
      break;
    case RootSystem::C:
      c.g4 = sqrt2<S>() * hbar * xi;
      break;
    case RootSystem::A:
    case RootSystem::D:
      break;
  }
  return c;
}

/// Checks z_i != 0 (BCD), z_i != z_k, and z_i != -z_k (BCD).
template <class S>
void check_admissible(std::span<const S> z, RootSystem kind) {
  const bool bcd = kind != RootSystem::A;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (bcd && is_zero(z[i])) throw Error(ErrorCode::ZeroCoordinate, "coordinate " + std::to_string(i + 1) + " is zero");
    for (std::size_t k = i + 1; k < z.size(); ++k) {
      if (is_zero(S(z[i] - z[k])))
        throw Error(ErrorCode::CoincidingCoordinates,
                    "coordinates " + std::to_string(i + 1) + " and " + std::to_string(k + 1) + " coincide");
      if (bcd && is_zero(S(z[i] + z[k])))
        throw Error(ErrorCode::CoincidingCoordinates,
                    "coordinates " + std::to_string(i + 1) + " and " + std::to_string(k + 1) + " are opposite");
    }
  }
}

/// Model specification shared by the CLI and the verification families.
/// For B the quantum model carries a hidden site at z = 0; n counts visible sites.
struct ModelSpec {
  RootSystem root_system = RootSystem::C;
  int n = 1;
  int m = 0;
  std::vector<Complex> z;
  Complex xi{0.0, 0.0};
  Complex hbar{1.0, 0.0};
  Complex omega{0.0, 0.0};

  /// Enforces 0 <= m <= n/2, |z| = n, admissibility, and xi = 0 for B and D.
  void validate() const;
};

ModelSpec make_model(RootSystem kind, std::vector<Complex> z, int m, Complex xi, Complex hbar, Complex omega = {});

void to_json(nlohmann::json& j, const ModelSpec& spec);
void from_json(const nlohmann::json& j, ModelSpec& spec);

nlohmann::json complex_to_json(const Complex& z);
Complex complex_from_json(const nlohmann::json& j);

/// Parses "re", "re+imi", "re-imi", "imi" or "i".
Complex parse_complex(std::string_view text);

}  // namespace qcd

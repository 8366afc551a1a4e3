#pragma once

// Factorized form of the BCD Lax matrix at the special velocities
//
//   C/D:  L' = h D0^{-1} V (C0 - (1-2 xi) Ct) V^{-1} D0
//   B:    L''= h D0^{-1} V (C0 + Ct) V^{-1} D0
//
// with D0 diagonal, V a generalized Vandermonde matrix, and C0, Ct strictly
// upper triangular (so the product is nilpotent).

#include "qcduality/lax.hpp"
#include "qcduality/matrix.hpp"
#include "qcduality/model.hpp"

#include <span>
#include <vector>

namespace qcd::factorize {

template <class S>
struct FactorizationKit {
  Matrix<S> d0;      // diagonal
  Matrix<S> v;       // generalized Vandermonde
  Matrix<S> c0;      // (C0)_{i,i+1} = i (1-based)
  Matrix<S> ctilde;  // 1 on (i, i+1) when i+1 is even
};

template <class S>
FactorizationKit<S> build_kit(std::span<const S> q, RootSystem kind) {
  if (kind == RootSystem::A) throw Error(ErrorCode::InvalidArgument, "factorization kit exists for B, C, D only");
  check_admissible(q, kind);
  const std::size_t n = q.size();
  const std::size_t size = lax_size(kind, n);
  FactorizationKit<S> kit{Matrix<S>(size, size), Matrix<S>(size, size), Matrix<S>(size, size), Matrix<S>(size, size)};
  const bool b_type = kind == RootSystem::B;
  for (std::size_t i = 0; i < n; ++i) {
    S prod = from_int<S>(1);
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) prod *= (q[i] - q[k]) * (q[i] + q[k]);
    if (b_type) {
      S v = sqrt2<S>() * q[i] * q[i] * prod;
      kit.d0(i, i) = v;
      kit.d0(n + i, n + i) = v;
    } else {
      S v = from_int<S>(2) * q[i] * prod;
      kit.d0(i, i) = v;
      kit.d0(n + i, n + i) = -v;
    }
    S up = from_int<S>(1);
    S down = from_int<S>(1);
    for (std::size_t j = 0; j < size; ++j) {
      kit.v(i, j) = up;
      kit.v(n + i, j) = down;
      up *= q[i];
      down *= -q[i];
    }
  }
  if (b_type) {
    S prod = from_int<S>(1);
    for (std::size_t k = 0; k < n; ++k) prod *= -(q[k] * q[k]);
    kit.d0(2 * n, 2 * n) = prod;
    kit.v(2 * n, 0) = from_int<S>(1);
  }
  for (std::size_t i = 0; i + 1 < size; ++i) {
    const long j = static_cast<long>(i) + 2;  // 1-based column index of (i, i+1)
    kit.c0(i, i + 1) = from_int<S>(j - 1);
    if (j % 2 == 0) kit.ctilde(i, i + 1) = from_int<S>(1);
  }
  return kit;
}

/// C/D: qdot_i = xi h/q_i + sum_{k!=i} (h/(q_i-q_k) + h/(q_i+q_k)); B uses 2h/q_i.
template <class S>
std::vector<S> special_velocities(std::span<const S> q, RootSystem kind, const S& xi, const S& hbar) {
  if (kind == RootSystem::A) throw Error(ErrorCode::InvalidArgument, "special velocities exist for B, C, D only");
  check_admissible(q, kind);
  const S boundary = kind == RootSystem::B ? from_int<S>(2) : (kind == RootSystem::D ? from_int<S>(0) : xi);
  std::vector<S> v;
  for (std::size_t i = 0; i < q.size(); ++i) {
    S acc = boundary * hbar / q[i];
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (k == i) continue;
      acc += hbar / S(q[i] - q[k]) + hbar / S(q[i] + q[k]);
    }
    v.push_back(acc);
  }
  return v;
}

/// Coefficient s of the nilpotent combination C0 + s Ct.
template <class S>
S nilpotent_mix(RootSystem kind, const S& xi) {
  switch (kind) {
    case RootSystem::B: return from_int<S>(1);
    case RootSystem::C: return -(from_int<S>(1) - from_int<S>(2) * xi);
    case RootSystem::D: return from_int<S>(-1);
    case RootSystem::A: break;
  }
  throw Error(ErrorCode::InvalidArgument, "no nilpotent combination for A");
}

/// h D0^{-1} V (C0 + s Ct) V^{-1} D0.
template <class S>
Matrix<S> factorized_lax(std::span<const S> q, RootSystem kind, const S& xi, const S& hbar) {
  auto kit = build_kit(q, kind);
  Matrix<S> core = kit.c0 + nilpotent_mix(kind, xi) * kit.ctilde;
  Matrix<S> vinv = inverse(kit.v);
  Matrix<S> d0inv(kit.d0.rows(), kit.d0.cols());
  for (std::size_t i = 0; i < kit.d0.rows(); ++i) d0inv(i, i) = from_int<S>(1) / kit.d0(i, i);
  return hbar * (d0inv * kit.v * core * vinv * kit.d0);
}

/// Lax matrix at the special velocities with the preset couplings.
template <class S>
Matrix<S> special_lax(std::span<const S> q, RootSystem kind, const S& xi, const S& hbar) {
  auto qdot = special_velocities(q, kind, xi, hbar);
  auto c = preset_couplings(kind, hbar, kind == RootSystem::C ? xi : from_int<S>(0));
  return lax::build_lax_bcd<S>(qdot, q, c);
}

struct Residual {
  double max_abs = 0.0;
  bool exact = false;       // computed in an exact scalar family
  bool exact_zero = false;  // exact and identically zero
};

template <class S>
Residual matrix_residual(const Matrix<S>& diff) {
  Residual r;
  r.max_abs = diff.max_abs();
  r.exact = is_exact_v<S>;
  r.exact_zero = r.exact && diff.is_zero();
  return r;
}

/// Entrywise deviation between the special-velocity Lax matrix and its
/// factorized product.
template <class S>
Residual factorization_residual(std::span<const S> q, RootSystem kind, const S& xi, const S& hbar) {
  return matrix_residual<S>(special_lax(q, kind, xi, hbar) - factorized_lax(q, kind, xi, hbar));
}

}  // namespace qcd::factorize

#pragma once

// Classical Calogero-Moser Lax pairs for the A and BC-type root systems.
//
// BCD layout, N particles, size 2N+1 (B) or 2N (C, D with the g1 row and
// column removed):
//
//       | P+A    B    C |          | Ǎ+d   B̌    Č  |
//   L = | -B   -P-A  -C |      M = | B̌    Ǎ+d   Č  |
//       | -C^T  C^T   0 |          | Č^T  Č^T   d0 |
//
// L anticommutes with the block swap K = [[0,1,0],[1,0,0],[0,0,1]] and M
// commutes with it, so [L, M] keeps the shape of L. Ldot = [L, M] holds for
// couplings satisfying g1 (g1^2 - 2 g2^2 + sqrt2 g2 g4) = 0.

#include "qcduality/matrix.hpp"
#include "qcduality/model.hpp"

#include <span>
#include <utility>
#include <vector>

namespace qcd::lax {

template <class S>
struct PhasePoint {
  std::vector<S> q;
  std::vector<S> p;
};

namespace detail {

template <class S>
S inv(const S& x) {
  if (is_zero(x)) throw Error(ErrorCode::PoleCollision, "pole in Lax entry");
  return from_int<S>(1) / x;
}

}  // namespace detail

/// L_ij = delta_ij qdot_i + g (1 - delta_ij)/(q_i - q_j).
template <class S>
Matrix<S> build_lax_a(std::span<const S> qdot, std::span<const S> q, const S& g) {
  if (qdot.size() != q.size()) throw Error(ErrorCode::InvalidArgument, "qdot and q differ in length");
  check_admissible(q, RootSystem::A);
  const std::size_t n = q.size();
  Matrix<S> l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    l(i, i) = qdot[i];
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) l(i, j) = g * detail::inv(S(q[i] - q[j]));
  }
  return l;
}

/// M_ii = sum_k g/(q_i-q_k)^2, M_ij = -g/(q_i-q_j)^2; rows sum to zero.
template <class S>
Matrix<S> build_m_a(std::span<const S> q, const S& g) {
  check_admissible(q, RootSystem::A);
  const std::size_t n = q.size();
  Matrix<S> m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      S d = q[i] - q[j];
      S v = g * detail::inv(S(d * d));
      m(i, j) = -v;
      m(i, i) += v;
    }
  }
  return m;
}

template <class S>
Matrix<S> build_lax_bcd(std::span<const S> qdot, std::span<const S> q, const Couplings<S>& c) {
  if (c.kind == RootSystem::A) throw Error(ErrorCode::InvalidArgument, "build_lax_bcd needs a B, C or D coupling set");
  if (qdot.size() != q.size()) throw Error(ErrorCode::InvalidArgument, "qdot and q differ in length");
  validate_couplings(c);
  check_admissible(q, c.kind);
  const std::size_t n = q.size();
  const std::size_t size = lax_size(c.kind, n);
  const S two = from_int<S>(2);
  Matrix<S> l(size, size);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      S pa = from_int<S>(0);
      S bb = from_int<S>(0);
      if (a == b) {
        pa = qdot[a];
        bb = c.g4 * sqrt2<S>() * detail::inv(S(two * q[a]));
      } else {
        pa = c.g2 * detail::inv(S(q[a] - q[b]));
        bb = c.g2 * detail::inv(S(q[a] + q[b]));
      }
      l(a, b) = pa;
      l(a, n + b) = bb;
      l(n + a, b) = -bb;
      l(n + a, n + b) = -pa;
    }
    if (c.kind == RootSystem::B) {
      S col = c.g1 * detail::inv(q[a]);
      l(a, 2 * n) = col;
      l(n + a, 2 * n) = -col;
      l(2 * n, a) = -col;
      l(2 * n, n + a) = col;
    }
  }
  return l;
}

/// M-matrix partner of build_lax_bcd. For B the d0 corner is kept unless
/// `drop_corner` is set (that variant breaks the Lax equation and exists for
/// comparison only); C and D use the 2N block, where the corner decouples.
template <class S>
Matrix<S> build_m_bcd(std::span<const S> q, const Couplings<S>& c, bool drop_corner = false) {
  if (c.kind == RootSystem::A) throw Error(ErrorCode::InvalidArgument, "build_m_bcd needs a B, C or D coupling set");
  validate_couplings(c);
  check_admissible(q, c.kind);
  const std::size_t n = q.size();
  const std::size_t size = lax_size(c.kind, n);
  const S two = from_int<S>(2);
  const S four = from_int<S>(4);

  S g1sq_over_g2 = from_int<S>(0);
  if (!is_zero(c.g1)) {
    if (is_zero(c.g2)) throw Error(ErrorCode::InvalidArgument, "g1 != 0 requires g2 != 0");
    g1sq_over_g2 = c.g1 * c.g1 / c.g2;
  }

  Matrix<S> m(size, size);
  for (std::size_t a = 0; a < n; ++a) {
    S qa2 = q[a] * q[a];
    S d = g1sq_over_g2 * detail::inv(qa2) + c.g4 * sqrt2<S>() * detail::inv(S(four * qa2));
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      S dm = q[a] - q[b];
      S dp = q[a] + q[b];
      d += c.g2 * (detail::inv(S(dm * dm)) + detail::inv(S(dp * dp)));
    }
    for (std::size_t b = 0; b < n; ++b) {
      S ac = from_int<S>(0);
      S bc = from_int<S>(0);
      if (a == b) {
        ac = d;
        bc = -c.g4 * sqrt2<S>() * detail::inv(S(four * qa2));
      } else {
        S dm = q[a] - q[b];
        S dp = q[a] + q[b];
        ac = -c.g2 * detail::inv(S(dm * dm));
        bc = -c.g2 * detail::inv(S(dp * dp));
      }
      m(a, b) = ac;
      m(n + a, n + b) = ac;
      m(a, n + b) = bc;
      m(n + a, b) = bc;
    }
    if (c.kind == RootSystem::B) {
      S cc = -c.g1 * detail::inv(qa2);
      m(a, 2 * n) = cc;
      m(n + a, 2 * n) = cc;
      m(2 * n, a) = cc;
      m(2 * n, n + a) = cc;
    }
  }
  if (c.kind == RootSystem::B && !drop_corner) {
    S d0 = from_int<S>(0);
    for (std::size_t a = 0; a < n; ++a) d0 += detail::inv(S(q[a] * q[a]));
    m(2 * n, 2 * n) = two * c.g2 * d0;
  }
  return m;
}

/// Lax matrix for any root system (A uses g = g2).
template <class S>
Matrix<S> build_lax(std::span<const S> qdot, std::span<const S> q, const Couplings<S>& c) {
  if (c.kind == RootSystem::A) return build_lax_a(qdot, q, c.g2);
  return build_lax_bcd(qdot, q, c);
}

template <class S>
Matrix<S> build_m(std::span<const S> q, const Couplings<S>& c) {
  if (c.kind == RootSystem::A) return build_m_a(q, c.g2);
  return build_m_bcd(q, c);
}

/// H = 1/2 sum p^2 - g2^2 sum_{a<b} (1/(qa-qb)^2 + 1/(qa+qb)^2)
///     - g4^2 sum 1/(2qa)^2 - g1^2 sum 1/qa^2;
/// for A: 1/2 sum p^2 - g^2 sum_{a<b} 1/(qa-qb)^2 with g = g2.
template <class S>
S hamiltonian(const PhasePoint<S>& pt, const Couplings<S>& c) {
  const std::size_t n = pt.q.size();
  if (pt.p.size() != n) throw Error(ErrorCode::InvalidArgument, "q and p differ in length");
  check_admissible<S>(pt.q, c.kind);
  const bool bcd = c.kind != RootSystem::A;
  S kinetic = from_int<S>(0);
  for (const auto& p : pt.p) kinetic += p * p;
  S h = kinetic / from_int<S>(2);
  S g2sq = c.g2 * c.g2;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      S dm = pt.q[a] - pt.q[b];
      S term = detail::inv(S(dm * dm));
      if (bcd) {
        S dp = pt.q[a] + pt.q[b];
        term += detail::inv(S(dp * dp));
      }
      h -= g2sq * term;
    }
  }
  if (bcd) {
    S g4sq = c.g4 * c.g4;
    S g1sq = c.g1 * c.g1;
    for (std::size_t a = 0; a < n; ++a) {
      S qa2 = pt.q[a] * pt.q[a];
      h -= g4sq * detail::inv(S(from_int<S>(4) * qa2));
      h -= g1sq * detail::inv(qa2);
    }
  }
  return h;
}

/// qdot = p, pdot = -dH/dq in closed form.
template <class S>
std::pair<std::vector<S>, std::vector<S>> equations_of_motion(const PhasePoint<S>& pt, const Couplings<S>& c) {
  const std::size_t n = pt.q.size();
  if (pt.p.size() != n) throw Error(ErrorCode::InvalidArgument, "q and p differ in length");
  check_admissible<S>(pt.q, c.kind);
  const bool bcd = c.kind != RootSystem::A;
  const S two = from_int<S>(2);
  S g2sq = c.g2 * c.g2;
  std::vector<S> pdot(n, from_int<S>(0));
  for (std::size_t a = 0; a < n; ++a) {
    S grad = from_int<S>(0);
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      S dm = pt.q[a] - pt.q[b];
      S term = detail::inv(S(dm * dm * dm));
      if (bcd) {
        S dp = pt.q[a] + pt.q[b];
        term += detail::inv(S(dp * dp * dp));
      }
      grad += two * g2sq * term;
    }
    if (bcd) {
      S qa3 = pt.q[a] * pt.q[a] * pt.q[a];
      grad += c.g4 * c.g4 * detail::inv(S(two * qa3));
      grad += two * c.g1 * c.g1 * detail::inv(qa3);
    }
    pdot[a] = -grad;
  }
  return {pt.p, pdot};
}

/// H_k = tr(L^k)/(2k) for BCD and tr(L^k)/k for A, k = 1..kmax.
template <class S>
std::vector<S> integrals_of_motion(const Matrix<S>& l, int kmax, RootSystem kind) {
  if (kmax < 1) throw Error(ErrorCode::InvalidArgument, "kmax must be at least 1");
  std::vector<S> out;
  Matrix<S> pw = Matrix<S>::identity(l.rows());
  for (int k = 1; k <= kmax; ++k) {
    pw = pw * l;
    long denom = kind == RootSystem::A ? k : 2 * k;
    out.push_back(pw.trace() / from_int<S>(denom));
  }
  return out;
}

// ---- floating-point dynamics -------------------------------------------------

struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint<Complex>> points;
};

/// Smallest of |q_i - q_k|, and for BCD also |q_i + q_k| and |q_i|.
double collision_distance(std::span<const Complex> q, RootSystem kind);

/// Fixed-step RK4 over equations_of_motion. Returns steps+1 samples including
/// the start. Throws SingularityApproached once the collision distance drops
/// below `guard`.
Trajectory evolve(const PhasePoint<Complex>& start, const Couplings<Complex>& c, double dt, int steps,
                  double guard = 1e-6);

/// Eigenvalues sorted by (magnitude, phase).
std::vector<Complex> spectrum(const Matrix<Complex>& m);

/// Largest deviation under a greedy nearest-neighbour matching of two spectra.
double spectrum_distance(std::span<const Complex> a, std::span<const Complex> b);

/// CSV with columns t, q_1..q_N, p_1..p_N (real parts; imaginary parts appended
/// as im_q_k / im_p_k columns when any coordinate is complex).
std::string trajectory_csv(const Trajectory& traj);

}  // namespace qcd::lax

#pragma once

// Gaudin eigenvalues in terms of Bethe roots, Bethe-equation residuals and
// Jacobians, and a multistart damped-Newton root finder.

#include "qcduality/matrix.hpp"
#include "qcduality/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace qcd::bethe {

/// A_twisted: periodic chain with twist omega; BoundaryC: boundary chain with
/// parameter xi (D is xi = 0); BoundaryB: boundary chain with a hidden site
/// at z = 0 and no xi.
enum class BetheKind { ATwisted, BoundaryC, BoundaryB };

BetheKind bethe_kind_for(RootSystem kind);
std::string to_string(BetheKind kind);

template <class S>
struct BetheSystem {
  BetheKind kind = BetheKind::BoundaryC;
  std::vector<S> z;
  S param{};  // xi for BoundaryC, omega for ATwisted, unused for BoundaryB
  S hbar{};
};

struct BetheState {
  std::vector<Complex> mu;
  double residual_norm = 0.0;
  bool converged = false;
  bool singular = false;
  double jacobian_condition = 0.0;
  int seed_id = -1;
};

struct SolveReport {
  std::vector<BetheState> states;
  int attempts = 0;
  int converged_seeds = 0;
  int diverged_seeds = 0;
  int stalled_seeds = 0;
  double deduplication_radius = 0.0;
  double tolerance = 0.0;
};

struct SolveOptions {
  int seed_count = 64;
  std::uint64_t rng_seed = 1;
  double tol = 0.0;  // 0 selects 1e-12 max(1, |h|/min|z|)
  int jobs = 0;      // 0 selects hardware concurrency
  int max_newton_steps = 200;
  int max_backtracks = 40;
};

namespace detail {

template <class S>
S pole(const S& x) {
  if (is_zero(x)) throw Error(ErrorCode::PoleCollision, "Bethe root collides with a pole");
  return from_int<S>(1) / x;
}

}  // namespace detail

/// H_i = omega + sum_{k!=i} h/(z_i-z_k) + sum_g h/(mu_g-z_i).
template <class S>
std::vector<S> gaudin_eigs_a(std::span<const S> z, std::span<const S> mu, const S& omega, const S& hbar) {
  std::vector<S> h;
  for (std::size_t i = 0; i < z.size(); ++i) {
    S acc = omega;
    for (std::size_t k = 0; k < z.size(); ++k)
      if (k != i) acc += hbar * detail::pole(S(z[i] - z[k]));
    for (const auto& m : mu) acc += hbar * detail::pole(S(m - z[i]));
    h.push_back(acc);
  }
  return h;
}

/// H_i/h = xi/z_i + sum_{k!=i}(1/(z_i-z_k) + 1/(z_i+z_k)) - sum_g (1/(z_i-mu_g) + 1/(z_i+mu_g)).
template <class S>
std::vector<S> gaudin_eigs_boundary(std::span<const S> z, std::span<const S> mu, const S& xi, const S& hbar) {
  std::vector<S> h;
  for (std::size_t i = 0; i < z.size(); ++i) {
    S acc = xi * detail::pole(z[i]);
    for (std::size_t k = 0; k < z.size(); ++k)
      if (k != i) acc += detail::pole(S(z[i] - z[k])) + detail::pole(S(z[i] + z[k]));
    for (const auto& m : mu) acc -= detail::pole(S(z[i] - m)) + detail::pole(S(z[i] + m));
    h.push_back(hbar * acc);
  }
  return h;
}

/// Hidden-site boundary chain: the boundary formula at xi = 2.
template <class S>
std::vector<S> gaudin_eigs_b(std::span<const S> z, std::span<const S> mu, const S& hbar) {
  return gaudin_eigs_boundary(z, mu, from_int<S>(2), hbar);
}

template <class S>
std::vector<S> gaudin_eigs(const BetheSystem<S>& sys, std::span<const S> mu) {
  switch (sys.kind) {
    case BetheKind::ATwisted: return gaudin_eigs_a<S>(sys.z, mu, sys.param, sys.hbar);
    case BetheKind::BoundaryC: return gaudin_eigs_boundary<S>(sys.z, mu, sys.param, sys.hbar);
    case BetheKind::BoundaryB: return gaudin_eigs_b<S>(sys.z, mu, sys.hbar);
  }
  return {};
}

/// LHS - RHS of the Bethe equations, one entry per root.
///   A:  2 omega + h sum_k 1/(mu-z_k) - 2h sum_{c!=g} 1/(mu-mu_c)
///   C:  (2 xi - 2)/mu + sum_k (1/(mu-z_k) + 1/(mu+z_k)) - 2 sum_{c!=g} (1/(mu-mu_c) + 1/(mu+mu_c))
///   B:  as C without the 1/mu term
template <class S>
std::vector<S> bethe_residual(const BetheSystem<S>& sys, std::span<const S> mu) {
  const S two = from_int<S>(2);
  std::vector<S> r;
  for (std::size_t g = 0; g < mu.size(); ++g) {
    const S& x = mu[g];
    S acc = from_int<S>(0);
    if (sys.kind == BetheKind::ATwisted) {
      acc = two * sys.param;
      for (const auto& zk : sys.z) acc += sys.hbar * detail::pole(S(x - zk));
      for (std::size_t c = 0; c < mu.size(); ++c)
        if (c != g) acc -= two * sys.hbar * detail::pole(S(x - mu[c]));
    } else {
      if (sys.kind == BetheKind::BoundaryC) acc = (two * sys.param - two) * detail::pole(x);
      for (const auto& zk : sys.z) acc += detail::pole(S(x - zk)) + detail::pole(S(x + zk));
      for (std::size_t c = 0; c < mu.size(); ++c)
        if (c != g) acc -= two * (detail::pole(S(x - mu[c])) + detail::pole(S(x + mu[c])));
    }
    r.push_back(acc);
  }
  return r;
}

/// d residual_g / d mu_b in closed form; symmetric for every kind.
template <class S>
Matrix<S> bethe_jacobian(const BetheSystem<S>& sys, std::span<const S> mu) {
  const std::size_t m = mu.size();
  const S two = from_int<S>(2);
  auto sq = [](const S& v) { return S(v * v); };
  Matrix<S> j(m, m);
  for (std::size_t g = 0; g < m; ++g) {
    const S& x = mu[g];
    S diag = from_int<S>(0);
    if (sys.kind == BetheKind::ATwisted) {
      for (const auto& zk : sys.z) diag -= sys.hbar * detail::pole(sq(S(x - zk)));
      for (std::size_t c = 0; c < m; ++c) {
        if (c == g) continue;
        S inv2 = detail::pole(sq(S(x - mu[c])));
        diag += two * sys.hbar * inv2;
        j(g, c) = -two * sys.hbar * inv2;
      }
    } else {
      if (sys.kind == BetheKind::BoundaryC) diag -= (two * sys.param - two) * detail::pole(sq(x));
      for (const auto& zk : sys.z) diag -= detail::pole(sq(S(x - zk))) + detail::pole(sq(S(x + zk)));
      for (std::size_t c = 0; c < m; ++c) {
        if (c == g) continue;
        S im = detail::pole(sq(S(x - mu[c])));
        S ip = detail::pole(sq(S(x + mu[c])));
        diag += two * (im + ip);
        j(g, c) = two * (ip - im);
      }
    }
    j(g, g) = diag;
  }
  return j;
}

/// 1e-12 max(1, |h|/min|z|).
double default_tolerance(const BetheSystem<Complex>& sys);

/// True when some |mu_a -+ mu_b| (or |mu_g| for boundary kinds) is below 1e-8.
bool is_singular(BetheKind kind, std::span<const Complex> mu);

/// Multistart damped Newton; see SolveOptions. Throws NoSolutionsFound when no
/// seed converges. Output order is canonical and independent of `jobs`.
SolveReport solve_bethe(const BetheSystem<Complex>& sys, int magnons, const SolveOptions& opts = {});

/// Canonical representative: boundary roots sign-fixed (Re > 0, or Im >= 0 on
/// the imaginary axis), then sorted by magnitude and phase.
std::vector<Complex> canonicalize(BetheKind kind, std::vector<Complex> mu);

/// Max distance between two root sets under the best matching (modulo root
/// relabeling, and modulo sign flips for boundary kinds).
double root_set_distance(BetheKind kind, std::span<const Complex> a, std::span<const Complex> b);

/// Newton refinement of a converged root set in 120-digit arithmetic.
std::vector<HPComplex> refine_high_precision(const BetheSystem<Complex>& sys, std::span<const Complex> mu,
                                             int iterations = 12);

void to_json(nlohmann::json& j, const BetheState& s);
void to_json(nlohmann::json& j, const SolveReport& r);

}  // namespace qcd::bethe

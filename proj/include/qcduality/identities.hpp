#pragma once

// Primary (size N, 2N, 2N+1) and dual (size M, 2M) spectral matrices and the
// characteristic-polynomial identities relating them:
//
//   A:    det(L - l) = (w - l)^{N-M} det(Lt - l)
//   B:    det(L - l) = -l^{2N-2M+1} det(Lt - l)
//   C/D:  det(L - l) = l^{2N-2M} det(Lt - l)
//
// plus on-shell nilpotency and the pole/residue structure of both sides as
// functions of mu_1.

#include "qcduality/bethe.hpp"
#include "qcduality/lax.hpp"
#include "qcduality/matrix.hpp"
#include "qcduality/model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace qcd::identities {

namespace detail {

template <class S>
S inv(const S& x) {
  if (is_zero(x)) throw Error(ErrorCode::PoleCollision, "pole collision in spectral matrix");
  return from_int<S>(1) / x;
}

template <class S>
std::vector<S> without(std::span<const S> v, std::size_t idx) {
  std::vector<S> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != idx) out.push_back(v[i]);
  return out;
}

}  // namespace detail

/// `param` is omega for A and xi for C; it is ignored for B and D.
template <class S>
Matrix<S> build_primary(RootSystem kind, std::span<const S> q, std::span<const S> mu, const S& param, const S& hbar) {
  switch (kind) {
    case RootSystem::A: return lax::build_lax_a<S>(bethe::gaudin_eigs_a<S>(q, mu, param, hbar), q, hbar);
    case RootSystem::B:
      return lax::build_lax_bcd<S>(bethe::gaudin_eigs_b<S>(q, mu, hbar), q,
                                   preset_couplings(RootSystem::B, hbar, from_int<S>(0)));
    case RootSystem::C:
      return lax::build_lax_bcd<S>(bethe::gaudin_eigs_boundary<S>(q, mu, param, hbar), q,
                                   preset_couplings(RootSystem::C, hbar, param));
    case RootSystem::D:
      return lax::build_lax_bcd<S>(bethe::gaudin_eigs_boundary<S>(q, mu, from_int<S>(0), hbar), q,
                                   preset_couplings(RootSystem::D, hbar, from_int<S>(0)));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown root system");
}

/// Lt_ab = d_ab (w - sum_{c!=a} h/(mu_a-mu_c) - sum_k h/(q_k-mu_a)) + (1-d_ab) h/(mu_a-mu_b).
template <class S>
Matrix<S> build_dual_a(std::span<const S> q, std::span<const S> mu, const S& omega, const S& hbar) {
  const std::size_t m = mu.size();
  Matrix<S> l(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    S diag = omega;
    for (std::size_t c = 0; c < m; ++c)
      if (c != a) diag -= hbar * detail::inv(S(mu[a] - mu[c]));
    for (const auto& qk : q) diag -= hbar * detail::inv(S(qk - mu[a]));
    l(a, a) = diag;
    for (std::size_t b = 0; b < m; ++b)
      if (b != a) l(a, b) = hbar * detail::inv(S(mu[a] - mu[b]));
  }
  return l;
}

/// [[At, Bt], [-Bt, -At]] with
///   At_ii = h/mu_i + sum_k (h/(mu_i-q_k) + h/(mu_i+q_k)) - sum_{l!=i} (h/(mu_i-mu_l) + h/(mu_i+mu_l)),
///   At_ij = h/(mu_i-mu_j),  Bt_ii = h/mu_i,  Bt_ij = h/(mu_i+mu_j).
template <class S>
Matrix<S> build_dual_b(std::span<const S> q, std::span<const S> mu, const S& hbar) {
  const std::size_t m = mu.size();
  Matrix<S> l(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      S a = from_int<S>(0);
      S b = from_int<S>(0);
      if (i == j) {
        a = hbar * detail::inv(mu[i]);
        for (const auto& qk : q) a += hbar * (detail::inv(S(mu[i] - qk)) + detail::inv(S(mu[i] + qk)));
        for (std::size_t k = 0; k < m; ++k)
          if (k != i) a -= hbar * (detail::inv(S(mu[i] - mu[k])) + detail::inv(S(mu[i] + mu[k])));
        b = hbar * detail::inv(mu[i]);
      } else {
        a = hbar * detail::inv(S(mu[i] - mu[j]));
        b = hbar * detail::inv(S(mu[i] + mu[j]));
      }
      l(i, j) = a;
      l(i, m + j) = b;
      l(m + i, j) = -b;
      l(m + i, m + j) = -a;
    }
  }
  return l;
}

/// C-type Lax matrix at coordinates mu with velocities H^G(mu, q, 1-xi) and
/// couplings (0, h, sqrt2 h (1-xi)). D is xi = 0.
template <class S>
Matrix<S> build_dual_c(std::span<const S> q, std::span<const S> mu, const S& xi, const S& hbar) {
  const S dual_xi = from_int<S>(1) - xi;
  Couplings<S> c{RootSystem::C, from_int<S>(0), hbar, sqrt2<S>() * hbar * dual_xi};
  return lax::build_lax_bcd<S>(bethe::gaudin_eigs_boundary<S>(mu, q, dual_xi, hbar), mu, c);
}

template <class S>
Matrix<S> build_dual(RootSystem kind, std::span<const S> q, std::span<const S> mu, const S& param, const S& hbar) {
  switch (kind) {
    case RootSystem::A: return build_dual_a(q, mu, param, hbar);
    case RootSystem::B: return build_dual_b(q, mu, hbar);
    case RootSystem::C: return build_dual_c(q, mu, param, hbar);
    case RootSystem::D: return build_dual_c(q, mu, from_int<S>(0), hbar);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown root system");
}

/// The factor multiplying det(Lt - l) on the right-hand side.
template <class S>
Polynomial<S> identity_prefactor(RootSystem kind, std::size_t n, std::size_t m, const S& omega) {
  if (m > n) throw Error(ErrorCode::InvalidArgument, "more roots than sites");
  switch (kind) {
    case RootSystem::A: {
      Polynomial<S> f = Polynomial<S>::monomial(0);
      Polynomial<S> lin(std::vector<S>{omega, from_int<S>(-1)});
      for (std::size_t i = 0; i < n - m; ++i) f = f * lin;
      return f;
    }
    case RootSystem::B: return Polynomial<S>::monomial(2 * (n - m) + 1, from_int<S>(-1));
    case RootSystem::C:
    case RootSystem::D: return Polynomial<S>::monomial(2 * (n - m));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown root system");
}

template <class S>
struct IdentityCheck {
  Polynomial<S> lhs;  // det(L - l)
  Polynomial<S> rhs;  // prefactor * det(Lt - l)
  double max_coefficient_deviation = 0.0;
  // coefficient k of a degree-d polynomial compared against C(d,k) A^(d-k), A the
  // largest entry or parameter magnitude involved
  double relative_deviation = 0.0;
  bool exact = false;
  bool exact_zero = false;
};

template <class S>
IdentityCheck<S> identity_residual(RootSystem kind, std::span<const S> q, std::span<const S> mu, const S& param,
                                   const S& hbar) {
  if (mu.size() > q.size()) throw Error(ErrorCode::InvalidArgument, "more roots than sites");
  if (kind != RootSystem::A) {
    std::vector<S> all(q.begin(), q.end());
    all.insert(all.end(), mu.begin(), mu.end());
    check_admissible<S>(all, kind);
  } else {
    check_admissible<S>(q, kind);
    check_admissible<S>(mu, kind);
  }
  IdentityCheck<S> r;
  const auto primary = build_primary(kind, q, mu, param, hbar);
  const auto dual = build_dual(kind, q, mu, param, hbar);
  r.lhs = characteristic_polynomial(primary);
  r.rhs = identity_prefactor<S>(kind, q.size(), mu.size(), param) * characteristic_polynomial(dual);
  r.max_coefficient_deviation = max_difference(r.lhs, r.rhs);
  const double a = std::max({1.0, primary.max_abs(), dual.max_abs(), magnitude(param)});
  const std::size_t d = r.lhs.coefficients().size() - 1;
  double binom = 1.0;
  for (std::size_t k = 0; k <= d; ++k) {
    const double diff = magnitude(S(r.lhs.coefficients()[k] - r.rhs.coefficients()[k]));
    r.relative_deviation = std::max(r.relative_deviation, diff / (binom * std::pow(a, static_cast<double>(d - k))));
    binom = binom * static_cast<double>(d - k) / static_cast<double>(k + 1);
  }
  r.exact = is_exact_v<S>;
  r.exact_zero = r.exact && exactly_equal(r.lhs, r.rhs);
  return r;
}

// ---- on-shell checks -----------------------------------------------------------

struct NilpotencyReport {
  double max_eigenvalue = 0.0;        // root bound from the refined characteristic polynomial
  double double_precision_max = 0.0;  // largest |eigenvalue| of the double-precision matrix
  double scale = 1.0;                 // h / min(|z_i - z_k|, |z_i + z_k|, |z_i|)
  double relative = 0.0;              // max_eigenvalue / scale
  double bethe_residual = 0.0;        // after refinement
};

/// Primary matrix at q = z with the Gaudin eigenvalues of an on-shell root set
/// as velocities. The roots are refined to 120 digits, the characteristic
/// polynomial is formed at that precision, and its root magnitude bound
/// (Fujiwara) is reported. Kinds B, C, D; `xi` is used for C only.
NilpotencyReport onshell_nilpotency(RootSystem kind, std::span<const Complex> z, std::span<const Complex> mu,
                                    Complex xi, Complex hbar);

struct SpectrumDeviation {
  std::vector<Complex> eigenvalues;
  double max_deviation = 0.0;  // bound on the distance of every eigenvalue to {omega, -omega}
  double double_precision_deviation = 0.0;  // best matching of the double-precision eigenvalues
  double charpoly_deviation = 0.0;          // high-precision coefficient distance to the target
};

/// A-type: spectrum of the primary matrix at an on-shell root set. Roots are
/// refined in high precision; the bound comes from the characteristic polynomial.
SpectrumDeviation onshell_spectrum_a(std::span<const Complex> z, std::span<const Complex> mu, Complex omega,
                                     Complex hbar);

/// max_i |H_i(mu, q, 1-xi) + H_i(mu, {}, 1-xi)|: vanishes when mu solves the
/// C-type Bethe equations.
template <class S>
double dual_diagonal_reduction(std::span<const S> q, std::span<const S> mu, const S& xi, const S& hbar,
                               bool* exact_zero = nullptr) {
  const S dual_xi = from_int<S>(1) - xi;
  auto full = bethe::gaudin_eigs_boundary<S>(mu, q, dual_xi, hbar);
  auto bare = bethe::gaudin_eigs_boundary<S>(mu, std::span<const S>{}, dual_xi, hbar);
  double worst = 0.0;
  bool zero = true;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    S d = full[i] + bare[i];
    worst = std::max(worst, magnitude(d));
    zero = zero && is_zero(d);
  }
  if (exact_zero) *exact_zero = is_exact_v<S> && zero;
  return worst;
}

// ---- residue structure (C type) -------------------------------------------------

template <class S>
struct ResidueReport {
  // per lambda sample, max over the relations below of |lhs - rhs|
  std::vector<double> a0;          // a0 = l^gap at0, a0 = det(L^{M-1}_N - l), at0 = l^2 det(Lt^N_{M-1} - l)
  std::vector<double> c_minus;     // c_k^- = l^gap ct_k^-, c_k^- = -h^2 det(L^{M-1}_{N-1} - l)
  std::vector<double> c_plus;      // c_k^+ = l^gap ct_k^+
  std::vector<double> a_minus;     // a_k^- = l^gap at_k^- for every k
  std::vector<double> a1_closed;   // a_1^- = -2hF det(L^{M-1}_{N-1} - l), at_1^- likewise
  std::vector<double> a_plus;      // a_k^+ = l^gap at_k^+
  std::vector<double> pole_order;  // deviation of both sides from the degree-bounded partial fraction form
  bool exact = false;
  bool exact_zero = false;

  double max() const {
    double m = 0.0;
    for (const auto* v : {&a0, &c_minus, &c_plus, &a_minus, &a1_closed, &a_plus, &pole_order})
      for (double x : *v) m = std::max(m, x);
    return m;
  }
};

namespace detail {

/// Interpolating polynomial through (x_i, y_i) in Newton form, expanded.
template <class S>
Polynomial<S> interpolate(const std::vector<S>& x, const std::vector<S>& y) {
  const std::size_t n = x.size();
  std::vector<S> dd = y;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / S(x[i] - x[i - level]);
      if (i == level) break;
    }
  Polynomial<S> p(std::vector<S>{dd[n - 1]});
  for (std::size_t i = n - 1; i-- > 0;) {
    p = p * Polynomial<S>(std::vector<S>{-x[i], from_int<S>(1)});
    p = p + Polynomial<S>(std::vector<S>{dd[i]});
  }
  return p;
}

template <class S>
S det_shifted(const Matrix<S>& m, const S& lambda) {
  Matrix<S> a = m;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= lambda;
  return determinant(a);
}

template <class S>
S power(const S& x, std::size_t k) {
  S r = from_int<S>(1);
  for (std::size_t i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace detail

/// F = h(xi - 1/2)/q_1 + sum_{k!=1} (h/(q_1-q_k) + h/(q_1+q_k)) - sum_{l!=1} (h/(q_1-mu_l) + h/(q_1+mu_l)).
template <class S>
S residue_factor(std::span<const S> q, std::span<const S> mu, const S& xi, const S& hbar) {
  S f = hbar * (xi - from_rational<S>(Rational(1, 2))) * detail::inv(q[0]);
  for (std::size_t k = 1; k < q.size(); ++k)
    f += hbar * (detail::inv(S(q[0] - q[k])) + detail::inv(S(q[0] + q[k])));
  for (std::size_t l = 1; l < mu.size(); ++l)
    f -= hbar * (detail::inv(S(q[0] - mu[l])) + detail::inv(S(q[0] + mu[l])));
  return f;
}

/// Pole/residue structure in mu_1 of det(L^M_N - l) and det(Lt^N_M - l) for
/// the C family (D is xi = 0). Both are rational in mu_1 with poles of order
/// at most two at mu_1 = +-q_k; multiplying by W = prod_k (mu_1^2 - q_k^2)^2
/// gives polynomials of degree <= 4N that are recovered by interpolation
/// (checked at extra points), from which a0, a_k^+-, c_k^+- follow.
template <class S>
ResidueReport<S> residue_structure_check(std::span<const S> q, std::span<const S> mu, const S& xi, const S& hbar,
                                         std::span<const S> lambdas) {
  const std::size_t n = q.size();
  const std::size_t m = mu.size();
  if (m < 1 || m > n) throw Error(ErrorCode::InvalidArgument, "residue check needs 1 <= M <= N");
  {
    std::vector<S> all(q.begin(), q.end());
    all.insert(all.end(), mu.begin(), mu.end());
    check_admissible<S>(all, RootSystem::C);
  }
  const std::size_t gap = 2 * (n - m);
  const std::size_t degree = 4 * n;
  const std::size_t extra = 3;

  // sample points for mu_1 away from every pole and from the other roots
  std::vector<S> xs;
  std::vector<S> rest(mu.begin() + 1, mu.end());
  for (long t = 1; xs.size() < degree + 1 + extra; ++t) {
    S cand = from_rational<S>(Rational(7 * t + 3, 5)) + (t % 2 == 0 ? from_int<S>(0) : from_rational<S>(Rational(1, 11)));
    if (t % 3 == 0) cand = -cand;
    bool ok = !is_zero(cand);
    for (const auto& v : q) ok = ok && !is_zero(S(cand - v)) && !is_zero(S(cand + v));
    for (const auto& v : rest) ok = ok && !is_zero(S(cand - v)) && !is_zero(S(cand + v));
    if (ok) xs.push_back(cand);
  }

  // W(mu) = prod (mu - q_k)^2 (mu + q_k)^2 and W_k^-(mu) = W/(mu - q_k)^2
  auto lin = [](const S& root) { return Polynomial<S>(std::vector<S>{-root, from_int<S>(1)}); };
  Polynomial<S> w = Polynomial<S>::monomial(0);
  for (const auto& v : q) w = w * lin(v) * lin(v) * lin(S(-v)) * lin(S(-v));
  auto w_without = [&](const S& root) {
    Polynomial<S> r = Polynomial<S>::monomial(0);
    for (const auto& v : q) {
      for (const S& s : {v, S(-v)})
        if (s != root) r = r * lin(s) * lin(s);
    }
    return r;
  };

  ResidueReport<S> rep;
  rep.exact = is_exact_v<S>;
  bool zero = true;
  auto record = [&](std::vector<double>& slot, const S& diff) {
    slot.back() = std::max(slot.back(), magnitude(diff));
    zero = zero && is_zero(diff);
  };

  std::vector<S> mu_var(mu.begin(), mu.end());
  const std::vector<S> q_minus1 = detail::without<S>(q, 0);
  const std::vector<S> mu_rest = rest;

  for (const S& lam : lambdas) {
    for (auto* v : {&rep.a0, &rep.c_minus, &rep.c_plus, &rep.a_minus, &rep.a1_closed, &rep.a_plus, &rep.pole_order})
      v->push_back(0.0);
    const S lam_gap = detail::power(lam, gap);

    // numerators P = W det(...) for both sides, interpolated from the first degree+1 points
    std::vector<S> yp, yd;
    for (const auto& x : xs) {
      mu_var[0] = x;
      S wx = w(x);
      yp.push_back(wx * detail::det_shifted(build_primary<S>(RootSystem::C, q, mu_var, xi, hbar), lam));
      yd.push_back(wx * detail::det_shifted(build_dual_c<S>(q, mu_var, xi, hbar), lam));
    }
    std::vector<S> xfit(xs.begin(), xs.begin() + static_cast<long>(degree + 1));
    std::vector<S> pfit(yp.begin(), yp.begin() + static_cast<long>(degree + 1));
    std::vector<S> dfit(yd.begin(), yd.begin() + static_cast<long>(degree + 1));
    Polynomial<S> pp = detail::interpolate(xfit, pfit);
    Polynomial<S> pd = detail::interpolate(xfit, dfit);
    for (std::size_t i = degree + 1; i < xs.size(); ++i) {
      record(rep.pole_order, S(pp(xs[i]) - yp[i]));
      record(rep.pole_order, S(pd(xs[i]) - yd[i]));
    }

    // a0: leading coefficient of P over leading coefficient of W (= 1)
    auto coeff = [&](const Polynomial<S>& p, std::size_t k) {
      return k < p.coefficients().size() ? p.coefficients()[k] : from_int<S>(0);
    };
    const S a0 = coeff(pp, degree);
    const S at0 = coeff(pd, degree);
    record(rep.a0, S(a0 - lam_gap * at0));
    {
      S closed = detail::det_shifted(build_primary<S>(RootSystem::C, q, std::span<const S>(mu_rest), xi, hbar), lam);
      record(rep.a0, S(a0 - closed));
      S closed_dual =
          lam * lam * detail::det_shifted(build_dual_c<S>(q, std::span<const S>(mu_rest), xi, hbar), lam);
      record(rep.a0, S(at0 - closed_dual));
    }

    for (std::size_t k = 0; k < n; ++k) {
      const std::vector<S> q_minus_k = detail::without<S>(q, k);
      const S hh = hbar * hbar;
      const S det_reduced =
          detail::det_shifted(build_primary<S>(RootSystem::C, q_minus_k, std::span<const S>(mu_rest), xi, hbar), lam);
      const S det_reduced_dual =
          detail::det_shifted(build_dual_c<S>(q_minus_k, std::span<const S>(mu_rest), xi, hbar), lam);
      for (int sign : {-1, 1}) {
        const S root = sign < 0 ? q[k] : S(-q[k]);
        Polynomial<S> wk = w_without(root);
        const S wk_at = wk(root);
        const S c = pp(root) / wk_at;
        const S ct = pd(root) / wk_at;
        // derivative of P/W_k at the root
        Polynomial<S> wkd = wk.derivative();
        const S a = (pp.derivative()(root) * wk_at - pp(root) * wkd(root)) / (wk_at * wk_at);
        const S at = (pd.derivative()(root) * wk_at - pd(root) * wkd(root)) / (wk_at * wk_at);
        if (sign < 0) {
          record(rep.c_minus, S(c - lam_gap * ct));
          record(rep.c_minus, S(c + hh * det_reduced));
          record(rep.c_minus, S(ct + hh * det_reduced_dual));
          record(rep.a_minus, S(a - lam_gap * at));
          if (k == 0) {
            const S f = residue_factor<S>(q, mu, xi, hbar);
            record(rep.a1_closed, S(a + from_int<S>(2) * hbar * f * det_reduced));
            record(rep.a1_closed, S(at + from_int<S>(2) * hbar * f * det_reduced_dual));
          }
        } else {
          record(rep.c_plus, S(c - lam_gap * ct));
          record(rep.a_plus, S(a - lam_gap * at));
        }
      }
    }
  }
  rep.exact_zero = rep.exact && zero;
  return rep;
}

/// |det(L - l)| along q_1 = q_2 (1 + t) for each t, at fixed lambda; the
/// primary determinant stays bounded as t -> 0.
template <class S>
std::vector<double> collision_profile(RootSystem kind, std::span<const S> q, std::span<const S> mu, const S& param,
                                      const S& hbar, const S& lambda, std::span<const S> ts) {
  if (q.size() < 2) throw Error(ErrorCode::InvalidArgument, "collision profile needs N >= 2");
  std::vector<double> out;
  std::vector<S> qq(q.begin(), q.end());
  for (const auto& t : ts) {
    qq[0] = q[1] * (from_int<S>(1) + t);
    out.push_back(magnitude(detail::det_shifted(build_primary<S>(kind, qq, mu, param, hbar), lambda)));
  }
  return out;
}

// ---- certificates ----------------------------------------------------------------

struct Certificate {
  std::string check;
  RootSystem kind = RootSystem::C;
  std::size_t n = 0;
  std::size_t m = 0;
  nlohmann::json inputs;
  std::string mode;  // "rational" or "float"
  double residual = 0.0;
  std::string verdict;  // pass, fail, skipped-singular
};

void to_json(nlohmann::json& j, const Certificate& c);

nlohmann::json scalar_to_json(const QSqrt2& x);
nlohmann::json scalar_to_json(const Complex& x);

template <class S>
nlohmann::json scalars_to_json(std::span<const S> v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

}  // namespace qcd::identities

#pragma once

// Spin-chain side: operators on (C^2)^{(x)n}, boundary Gaudin Hamiltonians,
// Yang's R-matrix with diagonal K-matrices, the double-row transfer matrix,
// and joint diagonalization of commuting Hamiltonians by magnon sector.
//
// Basis conventions: site 1 is the most significant bit of the basis index;
// bit 0 is spin up, bit 1 is spin down, sigma3 = diag(1, -1). The number of
// down spins is the magnon number M.

#include "qcduality/matrix.hpp"
#include "qcduality/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace qcd::quantum {

template <class S>
using SpinOperator = Matrix<S>;

inline constexpr std::size_t max_sites = 12;

/// Number of sites n with 2^n == dim; throws for other dimensions.
std::size_t site_count(std::size_t dim);

namespace detail {

inline std::size_t bit_of(std::size_t site, std::size_t sites) { return sites - site; }  // sites 1..n

inline std::size_t swap_bits(std::size_t idx, std::size_t b1, std::size_t b2) {
  const std::size_t x = ((idx >> b1) ^ (idx >> b2)) & 1u;
  return idx ^ ((x << b1) | (x << b2));
}

inline void check_sites(std::size_t i, std::size_t n) {
  if (n < 1 || n > max_sites) throw Error(ErrorCode::InvalidArgument, "site count out of range");
  if (i < 1 || i > n) throw Error(ErrorCode::InvalidArgument, "site index out of range");
}

template <class S>
S inv(const S& x) {
  if (is_zero(x)) throw Error(ErrorCode::PoleCollision, "pole collision in spin-chain operator");
  return from_int<S>(1) / x;
}

}  // namespace detail

/// Swap of tensor legs i and k (1-based).
template <class S>
SpinOperator<S> permutation_op(std::size_t i, std::size_t k, std::size_t n) {
  detail::check_sites(i, n);
  detail::check_sites(k, n);
  if (i == k) throw Error(ErrorCode::InvalidArgument, "permutation needs two distinct sites");
  const std::size_t dim = std::size_t{1} << n;
  SpinOperator<S> p(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    p(detail::swap_bits(r, detail::bit_of(i, n), detail::bit_of(k, n)), r) = from_int<S>(1);
  return p;
}

template <class S>
SpinOperator<S> sigma3_op(std::size_t i, std::size_t n) {
  detail::check_sites(i, n);
  const std::size_t dim = std::size_t{1} << n;
  SpinOperator<S> s(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) s(r, r) = from_int<S>(((r >> detail::bit_of(i, n)) & 1u) ? -1 : 1);
  return s;
}

/// Number of down spins of every basis state.
std::vector<int> magnon_numbers(std::size_t n);

/// H_i/h = xi sigma3^(i)/z_i + sum_{k!=i} (P_ik/(z_i-z_k) + sigma3^(i) P_ik sigma3^(i)/(z_i+z_k))
/// on `sites` >= z.size() sites; only the first `visible` Hamiltonians are built.
template <class S>
std::vector<SpinOperator<S>> gaudin_hamiltonians_sites(std::span<const S> z, const S& xi, const S& hbar,
                                                       std::size_t visible) {
  const std::size_t n = z.size();
  if (n < 1 || n > max_sites) throw Error(ErrorCode::InvalidArgument, "site count out of range");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) {
      if (is_zero(S(z[i] - z[k])) || is_zero(S(z[i] + z[k])))
        throw Error(ErrorCode::PoleCollision, "inhomogeneities collide");
    }
  const std::size_t dim = std::size_t{1} << n;
  std::vector<SpinOperator<S>> hams;
  for (std::size_t i = 1; i <= visible; ++i) {
    SpinOperator<S> h(dim, dim);
    const std::size_t bi = detail::bit_of(i, n);
    const S boundary = xi * detail::inv(z[i - 1]);
    for (std::size_t r = 0; r < dim; ++r) {
      const bool down_i = (r >> bi) & 1u;
      h(r, r) += down_i ? -boundary : boundary;
      for (std::size_t k = 1; k <= n; ++k) {
        if (k == i) continue;
        const std::size_t bk = detail::bit_of(k, n);
        const S minus = detail::inv(S(z[i - 1] - z[k - 1]));
        const S plus = detail::inv(S(z[i - 1] + z[k - 1]));
        const bool differ = down_i != static_cast<bool>((r >> bk) & 1u);
        const std::size_t target = detail::swap_bits(r, bi, bk);
        // sigma3^(i) P_ik sigma3^(i) is P_ik with a sign flip when the spins differ
        h(target, r) += differ ? S(minus - plus) : S(minus + plus);
      }
    }
    hams.push_back(hbar * h);
  }
  return hams;
}

template <class S>
std::vector<SpinOperator<S>> gaudin_hamiltonians_boundary(std::span<const S> z, const S& xi, const S& hbar) {
  for (const auto& v : z)
    if (is_zero(v)) throw Error(ErrorCode::PoleCollision, "inhomogeneity at zero");
  return gaudin_hamiltonians_sites<S>(z, xi, hbar, z.size());
}

/// B-type chain: N visible sites plus a hidden site at z = 0 (site N+1), xi = 0.
/// Returns the N visible Hamiltonians acting on 2^{N+1} dimensions.
template <class S>
std::vector<SpinOperator<S>> gaudin_hamiltonians_b(std::span<const S> z, const S& hbar) {
  for (const auto& v : z)
    if (is_zero(v)) throw Error(ErrorCode::PoleCollision, "inhomogeneity at zero");
  std::vector<S> ext(z.begin(), z.end());
  ext.push_back(from_int<S>(0));
  return gaudin_hamiltonians_sites<S>(ext, from_int<S>(0), hbar, z.size());
}

/// R(u) = 1 + (eta/u) P on two sites.
template <class S>
SpinOperator<S> r_matrix(const S& u, const S& eta) {
  if (is_zero(u)) throw Error(ErrorCode::PoleCollision, "R-matrix at zero spectral parameter");
  SpinOperator<S> r = SpinOperator<S>::identity(4);
  r += (eta / u) * permutation_op<S>(1, 2, 2);
  return r;
}

/// 2x2 matrices K^-(u) = diag(1 + a e/u, -1 + a e/u), K^+(u) = diag(1 - b e/(u+e), -1 - b e/(u+e)).
template <class S>
std::pair<Matrix<S>, Matrix<S>> k_matrices(const S& u, const S& alpha, const S& beta, const S& eta) {
  const S one = from_int<S>(1);
  const S a = alpha * eta * detail::inv(u);
  const S b = beta * eta * detail::inv(S(u + eta));
  Matrix<S> km(2, 2);
  Matrix<S> kp(2, 2);
  km(0, 0) = one + a;
  km(1, 1) = a - one;
  kp(0, 0) = one - b;
  kp(1, 1) = -one - b;
  return {km, kp};
}

/// Kronecker product.
template <class S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

/// Embeds a two-site operator acting on legs (i, k) into n sites.
template <class S>
SpinOperator<S> embed_two_site(const SpinOperator<S>& op, std::size_t i, std::size_t k, std::size_t n) {
  detail::check_sites(i, n);
  detail::check_sites(k, n);
  if (i == k || op.rows() != 4 || op.cols() != 4) throw Error(ErrorCode::InvalidArgument, "bad two-site embedding");
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t bi = detail::bit_of(i, n);
  const std::size_t bk = detail::bit_of(k, n);
  SpinOperator<S> out(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t lc = (((c >> bi) & 1u) << 1) | ((c >> bk) & 1u);
    const std::size_t rest = c & ~((std::size_t{1} << bi) | (std::size_t{1} << bk));
    for (std::size_t lr = 0; lr < 4; ++lr) {
      if (is_zero(op(lr, lc))) continue;
      const std::size_t r = rest | ((lr >> 1) << bi) | ((lr & 1u) << bk);
      out(r, c) = op(lr, lc);
    }
  }
  return out;
}

/// R12(u1-u2) R13(u1) R23(u2) - R23(u2) R13(u1) R12(u1-u2) on three sites.
template <class S>
Matrix<S> ybe_residual(const S& u1, const S& u2, const S& eta) {
  auto r12 = embed_two_site(r_matrix(S(u1 - u2), eta), 1, 2, 3);
  auto r13 = embed_two_site(r_matrix(u1, eta), 1, 3, 3);
  auto r23 = embed_two_site(r_matrix(u2, eta), 2, 3, 3);
  return r12 * r13 * r23 - r23 * r13 * r12;
}

/// R12(u1-u2) K1(u1) R12(u1+u2) K2(u2) - K2(u2) R12(u1+u2) K1(u1) R12(u1-u2) for K^-.
template <class S>
Matrix<S> reflection_residual(const S& u1, const S& u2, const S& alpha, const S& eta) {
  const S zero = from_int<S>(0);
  auto id = Matrix<S>::identity(2);
  auto k1 = kron(k_matrices(u1, alpha, zero, eta).first, id);
  auto k2 = kron(id, k_matrices(u2, alpha, zero, eta).first);
  auto rm = r_matrix(S(u1 - u2), eta);
  auto rp = r_matrix(S(u1 + u2), eta);
  return rm * k1 * rp * k2 - k2 * rp * k1 * rm;
}

/// Dual reflection equation for K^+ (diagonal, so the partial transposes are trivial).
template <class S>
Matrix<S> dual_reflection_residual(const S& u1, const S& u2, const S& beta, const S& eta) {
  const S zero = from_int<S>(0);
  auto id = Matrix<S>::identity(2);
  auto k1 = kron(k_matrices(u1, zero, beta, eta).second.transpose(), id);
  auto k2 = kron(id, k_matrices(u2, zero, beta, eta).second.transpose());
  auto rm = r_matrix(S(u2 - u1), eta);
  auto rp = r_matrix(S(-u1 - u2 - from_int<S>(2) * eta), eta);
  return rm * k1 * rp * k2 - k2 * rp * k1 * rm;
}

/// T(u) = tr_0 K+_0(u) R_01(u-z_1)..R_0N(u-z_N) K-_0(u) R_0N(u+z_N)..R_01(u+z_1).
template <class S>
SpinOperator<S> transfer_matrix(const S& u, std::span<const S> z, const S& alpha, const S& beta, const S& eta) {
  const std::size_t n = z.size();
  if (n < 1 || n + 1 > max_sites) throw Error(ErrorCode::InvalidArgument, "site count out of range");
  const std::size_t sites = n + 1;  // auxiliary site 0 plus n physical sites
  const std::size_t dim = std::size_t{1} << sites;
  const std::size_t aux_bit = n;
  auto [km, kp] = k_matrices(u, alpha, beta, eta);

  Matrix<S> x = Matrix<S>::identity(dim);
  auto apply_r = [&](const S& w, std::size_t k) {
    const S c = eta * detail::inv(w);
    const std::size_t bk = n - k;
    Matrix<S> y = x;
    for (std::size_t r = 0; r < dim; ++r) {
      const std::size_t src = detail::swap_bits(r, aux_bit, bk);
      for (std::size_t col = 0; col < dim; ++col)
        if (!is_zero(x(src, col))) y(r, col) += c * x(src, col);
    }
    x = std::move(y);
  };
  auto apply_k = [&](const Matrix<S>& k) {
    for (std::size_t r = 0; r < dim; ++r) {
      const S& f = k((r >> aux_bit) & 1u, (r >> aux_bit) & 1u);
      for (std::size_t col = 0; col < dim; ++col)
        if (!is_zero(x(r, col))) x(r, col) = f * x(r, col);
    }
  };
  for (std::size_t k = 1; k <= n; ++k) apply_r(S(u + z[k - 1]), k);
  apply_k(km);
  for (std::size_t k = n; k >= 1; --k) apply_r(S(u - z[k - 1]), k);
  apply_k(kp);

  const std::size_t half = dim / 2;
  SpinOperator<S> t(half, half);
  for (std::size_t r = 0; r < half; ++r)
    for (std::size_t c = 0; c < half; ++c) t(r, c) = x(r, c) + x(r + half, c + half);
  return t;
}

/// T^G(u) = -2 alpha beta/u^2 + (1/h) sum_i (H_i/(u-z_i) - H_i/(u+z_i)), with H_i at xi = alpha - beta.
template <class S>
SpinOperator<S> gaudin_transfer(const S& u, std::span<const S> z, const S& alpha, const S& beta, const S& hbar) {
  auto hams = gaudin_hamiltonians_boundary<S>(z, S(alpha - beta), hbar);
  const std::size_t dim = hams.front().rows();
  SpinOperator<S> t = (from_int<S>(-2) * alpha * beta * detail::inv(S(u * u))) * SpinOperator<S>::identity(dim);
  const S inv_h = detail::inv(hbar);
  for (std::size_t i = 0; i < z.size(); ++i) {
    S w = detail::inv(S(u - z[i])) - detail::inv(S(u + z[i]));
    t += (inv_h * w) * hams[i];
  }
  return t;
}

template <class S>
S gamma_function(const S& u, std::span<const S> z) {
  S g = from_int<S>(0);
  for (const auto& zi : z) g += detail::inv(S(u - zi)) + detail::inv(S(u + zi));
  return g;
}

/// Coefficients of e^0, e^1, e^2 in T(u) at eta = e*h, computed with
/// truncated series arithmetic (exact when S is exact).
template <class S>
struct GaudinExpansion {
  Matrix<S> order0, order1, order2;
};

template <class S>
GaudinExpansion<S> transfer_expansion(const S& u, std::span<const S> z, const S& alpha, const S& beta, const S& hbar) {
  using J = Jet<S>;
  std::vector<J> zj;
  for (const auto& v : z) zj.push_back(J(v));
  const J eta(from_int<S>(0), hbar, from_int<S>(0));
  auto t = transfer_matrix<J>(J(u), zj, J(alpha), J(beta), eta);
  GaudinExpansion<S> e{Matrix<S>(t.rows(), t.cols()), Matrix<S>(t.rows(), t.cols()), Matrix<S>(t.rows(), t.cols())};
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) {
      e.order0(r, c) = t(r, c).c0;
      e.order1(r, c) = t(r, c).c1;
      e.order2(r, c) = t(r, c).c2;
    }
  return e;
}

struct ExpansionDeviation {
  double order0 = 0.0;  // |c0 - 2|
  double order1 = 0.0;  // |c1 - h gamma(u)|
  double order2 = 0.0;  // |c2 - h^2 T^G(u)|
  bool exact_zero = false;
};

template <class S>
ExpansionDeviation gaudin_limit_exact(const S& u, std::span<const S> z, const S& alpha, const S& beta, const S& hbar) {
  auto e = transfer_expansion(u, z, alpha, beta, hbar);
  const std::size_t dim = e.order0.rows();
  auto id = Matrix<S>::identity(dim);
  Matrix<S> d0 = e.order0 - from_int<S>(2) * id;
  Matrix<S> d1 = e.order1 - (hbar * gamma_function(u, z)) * id;
  Matrix<S> d2 = e.order2 - (hbar * hbar) * gaudin_transfer(u, z, alpha, beta, hbar);
  ExpansionDeviation dev;
  dev.order0 = d0.max_abs();
  dev.order1 = d1.max_abs();
  dev.order2 = d2.max_abs();
  dev.exact_zero = is_exact_v<S> && d0.is_zero() && d1.is_zero() && d2.is_zero();
  return dev;
}

/// Float variant: extracts the e^2 coefficient of T(u) at eta = e h by
/// polynomial extrapolation of (T - 2 - e h gamma)/(e h)^2 over eps_grid to
/// e = 0 and returns its max deviation from T^G(u).
double gaudin_limit_residual(Complex u, std::span<const Complex> z, Complex alpha, Complex beta, Complex hbar,
                             std::span<const double> eps_grid);

/// max_{i<j} |[H_i, H_j]| / max_i |H_i|^2 (max-entry norms).
double max_commutator_norm(std::span<const SpinOperator<Complex>> hams);

/// Largest |[H, sum_i sigma3^(i)]| over the list.
double max_magnon_violation(std::span<const SpinOperator<Complex>> hams);

struct SpectrumRecord {
  int sector = 0;  // magnon number M
  std::vector<Complex> eigs;
  int multiplicity = 1;
};

struct JointSpectrum {
  std::size_t sites = 0;
  std::vector<SpectrumRecord> records;

  /// Sum of multiplicities in sector m.
  int sector_dimension(int m) const;
  /// Smallest max-entry distance between `tuple` and a sector-m record,
  /// relative to max(1, |tuple|).
  double distance_to(int m, std::span<const Complex> tuple) const;
};

struct DiagonalizeOptions {
  std::uint64_t rng_seed = 7;
  double cluster_tol = 1e-9;
  int max_attempts = 5;
  int jobs = 1;
};

/// Joint eigenvalue tuples of commuting Hamiltonians that conserve the
/// magnon number, grouped by sector. Throws DegenerateCombination when a
/// random combination keeps merging distinct joint eigenvalues.
JointSpectrum diagonalize_joint(std::span<const SpinOperator<Complex>> hams, const DiagonalizeOptions& opts = {});

void to_json(nlohmann::json& j, const SpectrumRecord& r);
void to_json(nlohmann::json& j, const JointSpectrum& s);

/// CSV with columns sector, H_1..H_N, multiplicity (plus im_H_k columns when
/// any eigenvalue is complex).
std::string spectrum_csv(const JointSpectrum& s);

}  // namespace qcd::quantum

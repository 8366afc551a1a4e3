#include "qcduality/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qcd::identities {

namespace {

double pole_scale(RootSystem kind, std::span<const Complex> z) {
  double s = std::numeric_limits<double>::infinity();
  const bool bcd = kind != RootSystem::A;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (bcd) s = std::min(s, std::abs(z[i]));
    for (std::size_t k = i + 1; k < z.size(); ++k) {
      s = std::min(s, std::abs(z[i] - z[k]));
      if (bcd) s = std::min(s, std::abs(z[i] + z[k]));
    }
  }
  return std::isfinite(s) ? s : 1.0;
}

// 2 max(|a_{n-1}|, |a_{n-2}|^{1/2}, ..., |a_1|^{1/(n-1)}, |a_0/2|^{1/n}) for a
// monic polynomial sum a_k x^k; bounds every root magnitude.
double fujiwara_bound(const Polynomial<HPComplex>& p) {
  const auto& c = p.coefficients();
  const std::size_t n = c.size() - 1;
  if (n == 0) return 0.0;
  const HPComplex lead = c[n];
  double bound = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    HPReal mag = boost::multiprecision::abs(HPComplex(c[k] / lead));
    if (k == 0) mag /= 2;
    if (mag == 0) continue;
    const double root = static_cast<double>(boost::multiprecision::pow(mag, HPReal(1) / HPReal(n - k)));
    bound = std::max(bound, root);
  }
  return 2.0 * bound;
}

}  // namespace

NilpotencyReport onshell_nilpotency(RootSystem kind, std::span<const Complex> z, std::span<const Complex> mu,
                                    Complex xi, Complex hbar) {
  if (kind == RootSystem::A) throw Error(ErrorCode::InvalidArgument, "use onshell_spectrum_a for the A family");
  check_admissible<Complex>(z, kind);
  const Complex eff_xi = kind == RootSystem::C ? xi : Complex(0.0);
  if (bethe::is_singular(bethe::BetheKind::BoundaryC, mu))
    throw Error(ErrorCode::InvalidArgument, "singular root set");

  bethe::BetheSystem<Complex> sys{bethe::bethe_kind_for(kind), std::vector<Complex>(z.begin(), z.end()), eff_xi, hbar};
  auto refined = bethe::refine_high_precision(sys, mu);

  bethe::BetheSystem<HPComplex> hp_sys;
  hp_sys.kind = sys.kind;
  for (const auto& v : z) hp_sys.z.push_back(to_hp(v));
  hp_sys.param = to_hp(eff_xi);
  hp_sys.hbar = to_hp(hbar);

  NilpotencyReport rep;
  for (const auto& r : bethe::bethe_residual<HPComplex>(hp_sys, refined))
    rep.bethe_residual = std::max(rep.bethe_residual, magnitude(r));

  auto l = build_primary<HPComplex>(kind, hp_sys.z, refined, hp_sys.param, hp_sys.hbar);
  rep.max_eigenvalue = fujiwara_bound(characteristic_polynomial(l));

  std::vector<Complex> mu_d;
  for (const auto& v : refined) mu_d.push_back(to_complex(v));
  auto spec = lax::spectrum(build_primary<Complex>(kind, z, mu_d, eff_xi, hbar));
  for (const auto& e : spec) rep.double_precision_max = std::max(rep.double_precision_max, std::abs(e));

  rep.scale = std::abs(hbar) / pole_scale(kind, z);
  rep.relative = rep.max_eigenvalue / rep.scale;
  return rep;
}

SpectrumDeviation onshell_spectrum_a(std::span<const Complex> z, std::span<const Complex> mu, Complex omega,
                                     Complex hbar) {
  const std::size_t n = z.size();
  const std::size_t m = mu.size();
  if (m > n) throw Error(ErrorCode::InvalidArgument, "more roots than sites");
  check_admissible<Complex>(z, RootSystem::A);
  SpectrumDeviation dev;

  bethe::BetheSystem<Complex> sys{bethe::BetheKind::ATwisted, std::vector<Complex>(z.begin(), z.end()), omega, hbar};
  std::vector<HPComplex> refined;
  if (m > 0) refined = bethe::refine_high_precision(sys, mu);
  std::vector<HPComplex> hz;
  for (const auto& v : z) hz.push_back(to_hp(v));
  const HPComplex hw = to_hp(omega);
  auto p = characteristic_polynomial(build_primary<HPComplex>(RootSystem::A, hz, refined, hw, to_hp(hbar)));

  // det(L - lambda) target: (omega - lambda)^(N-M) (-omega - lambda)^M
  std::vector<HPComplex> target{HPComplex(1)};
  for (std::size_t k = 0; k < n; ++k) {
    const HPComplex root = k < n - m ? hw : HPComplex(-hw);
    std::vector<HPComplex> next(target.size() + 1, HPComplex(0));
    for (std::size_t i = 0; i < target.size(); ++i) {
      next[i] += root * target[i];
      next[i + 1] -= target[i];
    }
    target = std::move(next);
  }
  HPReal delta = 0;
  for (std::size_t i = 0; i <= n; ++i) delta = std::max(delta, HPReal(boost::multiprecision::abs(p.coefficients()[i] - target[i])));
  dev.charpoly_deviation = static_cast<double>(delta);

  // A root lambda of det(L - lambda) satisfies |target(lambda)| <= delta sum |lambda|^i,
  // and |target(lambda)| >= d^N with d its distance to {omega, -omega}.
  const HPReal radius = std::max(HPReal(fujiwara_bound(p)), HPReal(std::abs(omega)));
  HPReal sum = 0, pw = 1;
  for (std::size_t i = 0; i <= n; ++i, pw *= radius) sum += pw;
  dev.max_deviation = delta == 0 ? 0.0 : static_cast<double>(boost::multiprecision::pow(delta * sum, HPReal(1) / HPReal(n)));

  std::vector<Complex> mu_d;
  for (const auto& v : refined) mu_d.push_back(to_complex(v));
  dev.eigenvalues = lax::spectrum(build_primary<Complex>(RootSystem::A, z, mu_d, omega, hbar));
  std::vector<Complex> expected(n - m, omega);
  expected.insert(expected.end(), m, -omega);
  dev.double_precision_deviation = lax::spectrum_distance(dev.eigenvalues, expected);
  return dev;
}

nlohmann::json scalar_to_json(const QSqrt2& x) {
  if (x.is_rational()) return x.rational_part().get_str();
  return nlohmann::json{{"rational", x.rational_part().get_str()}, {"sqrt2", x.sqrt2_part().get_str()}};
}

nlohmann::json scalar_to_json(const Complex& x) { return complex_to_json(x); }

void to_json(nlohmann::json& j, const Certificate& c) {
  j = nlohmann::json{{"check", c.check},     {"kind", to_string(c.kind)}, {"N", c.n},
                     {"M", c.m},             {"inputs", c.inputs},        {"mode", c.mode},
                     {"residual", c.residual}, {"verdict", c.verdict}};
}

}  // namespace qcd::identities

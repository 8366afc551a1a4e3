#include "qcduality/bethe.hpp"

#include "qcduality/eigen_bridge.hpp"
#include "qcduality/parallel.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace qcd::bethe {

BetheKind bethe_kind_for(RootSystem kind) {
  switch (kind) {
    case RootSystem::A: return BetheKind::ATwisted;
    case RootSystem::B: return BetheKind::BoundaryB;
    case RootSystem::C:
    case RootSystem::D: return BetheKind::BoundaryC;
  }
  return BetheKind::BoundaryC;
}

std::string to_string(BetheKind kind) {
  switch (kind) {
    case BetheKind::ATwisted: return "A_twisted";
    case BetheKind::BoundaryC: return "BoundaryC";
    case BetheKind::BoundaryB: return "BoundaryB";
  }
  return "?";
}

namespace {

bool boundary(BetheKind kind) { return kind != BetheKind::ATwisted; }

// Smallest scale among the poles of the Gaudin formulas.
double pole_scale(const BetheSystem<Complex>& sys) {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sys.z.size(); ++i) {
    if (boundary(sys.kind)) s = std::min(s, std::abs(sys.z[i]));
    for (std::size_t k = i + 1; k < sys.z.size(); ++k) {
      s = std::min(s, std::abs(sys.z[i] - sys.z[k]));
      if (boundary(sys.kind)) s = std::min(s, std::abs(sys.z[i] + sys.z[k]));
    }
  }
  if (!std::isfinite(s)) s = sys.z.empty() ? 1.0 : std::max(1.0, std::abs(sys.z[0]));
  return s;
}

double max_z(const BetheSystem<Complex>& sys) {
  double m = 0.0;
  for (const auto& v : sys.z) m = std::max(m, std::abs(v));
  return m > 0.0 ? m : 1.0;
}

double inf_norm(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

double pair_distance(BetheKind kind, const Complex& a, const Complex& b) {
  double d = std::abs(a - b);
  if (boundary(kind)) d = std::min(d, std::abs(a + b));
  return d;
}

enum class SeedOutcome { Converged, Diverged, Stalled };

struct SeedResult {
  SeedOutcome outcome = SeedOutcome::Stalled;
  BetheState state;
};

std::vector<Complex> seed_roots(const BetheSystem<Complex>& sys, int magnons, int seed_id, std::uint64_t rng_seed,
                                int deterministic) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng_seed & 0xffffffffu), static_cast<std::uint32_t>(rng_seed >> 32),
                    static_cast<std::uint32_t>(seed_id)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> mu;
  if (seed_id < deterministic) {
    // midpoints of coordinate pairs, perturbed off the real axis so that
    // distinct roots start apart
    std::vector<Complex> mids;
    for (std::size_t i = 0; i < sys.z.size(); ++i)
      for (std::size_t k = i + 1; k < sys.z.size(); ++k) mids.push_back(0.5 * (sys.z[i] + sys.z[k]));
    if (mids.empty()) mids.push_back(1.5 * sys.z.front());
    for (int g = 0; g < magnons; ++g) {
      std::size_t idx = static_cast<std::size_t>(seed_id + g * (1 + seed_id)) % mids.size();
      double tilt = 0.05 * (g + 1) * ((seed_id + g) % 2 == 0 ? 1.0 : -1.0);
      mu.push_back(mids[idx] * Complex(1.0 + 0.01 * g, tilt));
    }
    return mu;
  }
  const double lo = std::log(0.3 * pole_scale(sys));
  const double hi = std::log(3.0 * max_z(sys));
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int g = 0; g < magnons; ++g) {
    double r = std::exp(lo + (hi - lo) * unit(rng));
    double phase = two_pi * unit(rng);
    mu.push_back(std::polar(r, phase));
  }
  return mu;
}

SeedResult run_seed(const BetheSystem<Complex>& sys, std::vector<Complex> mu, double tol, const SolveOptions& opts) {
  SeedResult res;
  const double blowup = 1e8 * max_z(sys);
  auto residual_norm = [&](const std::vector<Complex>& x) -> double {
    try {
      return inf_norm(bethe_residual<Complex>(sys, x));
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double norm = residual_norm(mu);
  int polish = 0;
  for (int step = 0; step < opts.max_newton_steps; ++step) {
    if (!std::isfinite(norm)) {
      res.outcome = SeedOutcome::Diverged;
      return res;
    }
    if (norm <= tol) {
      // two extra Newton steps tighten the root well below the tolerance
      if (++polish > 2) break;
    }
    std::vector<Complex> r;
    Matrix<Complex> j;
    try {
      r = bethe_residual<Complex>(sys, mu);
      j = bethe_jacobian<Complex>(sys, mu);
    } catch (const Error&) {
      res.outcome = SeedOutcome::Diverged;
      return res;
    }
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(r.size()));
    for (std::size_t g = 0; g < r.size(); ++g) rhs(static_cast<Eigen::Index>(g)) = -r[g];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(to_eigen(j));
    if (!lu.isInvertible()) {
      res.outcome = SeedOutcome::Stalled;
      return res;
    }
    Eigen::VectorXcd delta = lu.solve(rhs);
    double t = 1.0;
    bool accepted = false;
    std::vector<Complex> trial(mu.size());
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      for (std::size_t g = 0; g < mu.size(); ++g) trial[g] = mu[g] + t * delta(static_cast<Eigen::Index>(g));
      double tn = residual_norm(trial);
      if (tn < norm || (norm <= tol && tn <= tol)) {
        mu = trial;
        norm = tn;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    if (inf_norm(mu) > blowup) {
      res.outcome = SeedOutcome::Diverged;
      return res;
    }
  }
  if (!(norm <= tol)) {
    res.outcome = SeedOutcome::Stalled;
    return res;
  }
  res.outcome = SeedOutcome::Converged;
  res.state.mu = canonicalize(sys.kind, mu);
  res.state.residual_norm = norm;
  res.state.converged = true;
  res.state.singular = is_singular(sys.kind, res.state.mu);
  if (!res.state.singular) {
    try {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(bethe_jacobian<Complex>(sys, res.state.mu)));
      const auto& sv = svd.singularValues();
      double smin = sv(sv.size() - 1);
      res.state.jacobian_condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      res.state.jacobian_condition = std::numeric_limits<double>::infinity();
    }
  } else {
    res.state.jacobian_condition = std::numeric_limits<double>::infinity();
  }
  return res;
}

bool canonical_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t g = 0; g < std::min(a.size(), b.size()); ++g) {
    double ma = std::abs(a[g]);
    double mb = std::abs(b[g]);
    if (std::abs(ma - mb) > 1e-9 * std::max({1.0, ma, mb})) return ma < mb;
    double pa = std::arg(a[g]);
    double pb = std::arg(b[g]);
    if (std::abs(pa - pb) > 1e-9) return pa < pb;
  }
  return a.size() < b.size();
}

}  // namespace

double default_tolerance(const BetheSystem<Complex>& sys) {
  return 1e-12 * std::max(1.0, std::abs(sys.hbar) / pole_scale(sys));
}

bool is_singular(BetheKind kind, std::span<const Complex> mu) {
  constexpr double threshold = 1e-8;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (boundary(kind) && std::abs(mu[a]) < threshold) return true;
    for (std::size_t b = a + 1; b < mu.size(); ++b)
      if (pair_distance(kind, mu[a], mu[b]) < threshold) return true;
  }
  return false;
}

std::vector<Complex> canonicalize(BetheKind kind, std::vector<Complex> mu) {
  if (boundary(kind)) {
    for (auto& x : mu) {
      const double scale = std::abs(x);
      const bool on_imaginary_axis = std::abs(x.real()) <= 1e-12 * scale;
      if (on_imaginary_axis) {
        x = Complex(0.0, std::abs(x.imag()));
      } else if (x.real() < 0.0) {
        x = -x;
      }
    }
  }
  std::sort(mu.begin(), mu.end(), [](const Complex& a, const Complex& b) {
    double ma = std::abs(a);
    double mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-9 * std::max({1.0, ma, mb})) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  return mu;
}

double root_set_distance(BetheKind kind, std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t m = a.size();
  if (m == 0) return 0.0;
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  if (m <= 8) {
    do {
      double worst = 0.0;
      for (std::size_t g = 0; g < m && worst < best; ++g) worst = std::max(worst, pair_distance(kind, a[g], b[perm[g]]));
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // greedy matching for large root sets
  std::vector<bool> used(m, false);
  double worst = 0.0;
  for (std::size_t g = 0; g < m; ++g) {
    double d = std::numeric_limits<double>::infinity();
    std::size_t pick = 0;
    for (std::size_t h = 0; h < m; ++h) {
      if (used[h]) continue;
      double dh = pair_distance(kind, a[g], b[h]);
      if (dh < d) {
        d = dh;
        pick = h;
      }
    }
    used[pick] = true;
    worst = std::max(worst, d);
  }
  return worst;
}

SolveReport solve_bethe(const BetheSystem<Complex>& sys, int magnons, const SolveOptions& opts) {
  const int n = static_cast<int>(sys.z.size());
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one site");
  if (magnons < 0 || magnons > n / 2 + (sys.kind == BetheKind::ATwisted ? n - n / 2 : 0))
    throw Error(ErrorCode::InvalidArgument, "magnon number out of range");
  if (opts.seed_count < 1) throw Error(ErrorCode::InvalidArgument, "seed count must be positive");
  check_admissible<Complex>(sys.z, sys.kind == BetheKind::ATwisted ? RootSystem::A : RootSystem::C);

  SolveReport report;
  report.tolerance = opts.tol > 0.0 ? opts.tol : default_tolerance(sys);
  if (magnons == 0) {
    report.attempts = 1;
    report.converged_seeds = 1;
    report.states.push_back(BetheState{{}, 0.0, true, false, 1.0, 0});
    return report;
  }

  const int deterministic = std::min(opts.seed_count / 4, n * (n - 1) / 2);
  auto results = parallel_map<SeedResult>(static_cast<std::size_t>(opts.seed_count), opts.jobs, [&](std::size_t i) {
    const int id = static_cast<int>(i);
    SeedResult r = run_seed(sys, seed_roots(sys, magnons, id, opts.rng_seed, deterministic), report.tolerance, opts);
    r.state.seed_id = id;
    return r;
  });

  report.attempts = opts.seed_count;
  for (auto& r : results) {
    switch (r.outcome) {
      case SeedOutcome::Diverged: ++report.diverged_seeds; continue;
      case SeedOutcome::Stalled: ++report.stalled_seeds; continue;
      case SeedOutcome::Converged: ++report.converged_seeds; break;
    }
    double scale = std::max(1.0, inf_norm(r.state.mu));
    bool duplicate = false;
    for (const auto& kept : report.states) {
      double radius = 1e-8 * std::max(scale, inf_norm(kept.mu));
      if (root_set_distance(sys.kind, kept.mu, r.state.mu) <= radius) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) report.states.push_back(r.state);
  }
  double radius_scale = 0.0;
  for (const auto& s : report.states) radius_scale = std::max(radius_scale, inf_norm(s.mu));
  report.deduplication_radius = 1e-8 * std::max(1.0, radius_scale);
  if (report.states.empty())
    throw Error(ErrorCode::NoSolutionsFound,
                "no seed converged (" + std::to_string(report.diverged_seeds) + " diverged, " +
                    std::to_string(report.stalled_seeds) + " stalled)");
  std::stable_sort(report.states.begin(), report.states.end(),
                   [](const BetheState& a, const BetheState& b) { return canonical_less(a.mu, b.mu); });
  return report;
}

std::vector<HPComplex> refine_high_precision(const BetheSystem<Complex>& sys, std::span<const Complex> mu,
                                             int iterations) {
  BetheSystem<HPComplex> hp;
  hp.kind = sys.kind;
  for (const auto& v : sys.z) hp.z.push_back(to_hp(v));
  hp.param = to_hp(sys.param);
  hp.hbar = to_hp(sys.hbar);
  std::vector<HPComplex> x;
  for (const auto& v : mu) x.push_back(to_hp(v));
  for (int it = 0; it < iterations; ++it) {
    auto r = bethe_residual<HPComplex>(hp, x);
    auto j = bethe_jacobian<HPComplex>(hp, x);
    for (auto& v : r) v = -v;
    auto delta = solve(j, r);
    for (std::size_t g = 0; g < x.size(); ++g) x[g] += delta[g];
  }
  // refinement must polish, not relocate: the input has to sit next to a root
  double residual = 0.0;
  for (const auto& v : bethe_residual<HPComplex>(hp, x)) residual = std::max(residual, magnitude(v));
  for (std::size_t g = 0; g < x.size(); ++g) {
    const double moved = magnitude(HPComplex(x[g] - to_hp(mu[g])));
    if (moved > 1e-6 * std::max(1.0, std::abs(mu[g])) || !(residual < 1e-50))
      throw Error(ErrorCode::NonConvergence, "root set is not close to an on-shell point", moved);
  }
  return x;
}

void to_json(nlohmann::json& j, const BetheState& s) {
  nlohmann::json mu = nlohmann::json::array();
  for (const auto& v : s.mu) mu.push_back(complex_to_json(v));
  j = nlohmann::json{{"mu", mu},
                     {"residual", s.residual_norm},
                     {"seed_id", s.seed_id},
                     {"converged", s.converged},
                     {"singular", s.singular}};
  if (std::isfinite(s.jacobian_condition))
    j["jacobian_condition"] = s.jacobian_condition;
  else
    j["jacobian_condition"] = nullptr;
}

void to_json(nlohmann::json& j, const SolveReport& r) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : r.states) states.push_back(s);
  j = nlohmann::json{{"states", states},
                     {"attempts", r.attempts},
                     {"converged_seeds", r.converged_seeds},
                     {"diverged_seeds", r.diverged_seeds},
                     {"stalled_seeds", r.stalled_seeds},
                     {"deduplication_radius", r.deduplication_radius},
                     {"tolerance", r.tolerance}};
}

}  // namespace qcd::bethe

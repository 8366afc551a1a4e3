#include "qcduality/quantum.hpp"

#include "qcduality/eigen_bridge.hpp"
#include "qcduality/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace qcd::quantum {

std::size_t site_count(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) throw Error(ErrorCode::InvalidArgument, "dimension is not a power of two");
  return static_cast<std::size_t>(std::countr_zero(dim));
}

std::vector<int> magnon_numbers(std::size_t n) {
  std::vector<int> m(std::size_t{1} << n);
  for (std::size_t r = 0; r < m.size(); ++r) m[r] = std::popcount(r);
  return m;
}

double gaudin_limit_residual(Complex u, std::span<const Complex> z, Complex alpha, Complex beta, Complex hbar,
                             std::span<const double> eps_grid) {
  if (eps_grid.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three grid points");
  for (std::size_t a = 0; a < eps_grid.size(); ++a) {
    if (!(eps_grid[a] > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid points must be positive");
    for (std::size_t b = a + 1; b < eps_grid.size(); ++b)
      if (eps_grid[a] == eps_grid[b]) throw Error(ErrorCode::InvalidArgument, "grid points must differ");
  }
  const Complex gamma = gamma_function(u, z);
  std::vector<Matrix<Complex>> samples;
  for (double eps : eps_grid) {
    const Complex eta = eps * hbar;
    auto t = transfer_matrix<Complex>(u, z, alpha, beta, eta);
    const std::size_t dim = t.rows();
    t -= (2.0 + eta * gamma) * Matrix<Complex>::identity(dim);
    t *= 1.0 / (eta * eta);
    samples.push_back(std::move(t));
  }
  // Neville extrapolation to eps = 0, entrywise
  const std::size_t k = eps_grid.size();
  std::vector<Matrix<Complex>> p = samples;
  for (std::size_t level = 1; level < k; ++level) {
    for (std::size_t i = 0; i + level < k; ++i) {
      const double xi = eps_grid[i];
      const double xj = eps_grid[i + level];
      // value at 0 of the line through (xi, p[i]) and (xj, p[i+1])
      Matrix<Complex> next = (xj / (xj - xi)) * p[i];
      next -= (xi / (xj - xi)) * p[i + 1];
      p[i] = std::move(next);
    }
  }
  const Matrix<Complex>& extrapolated = p[0];
  if (!std::isfinite(extrapolated.max_abs())) throw Error(ErrorCode::ExtractionIllConditioned, "extrapolation failed");
  auto target = gaudin_transfer(u, z, alpha, beta, hbar);
  return (extrapolated - target).max_abs();
}

double max_commutator_norm(std::span<const SpinOperator<Complex>> hams) {
  double scale = 0.0;
  for (const auto& h : hams) scale = std::max(scale, h.max_abs());
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < hams.size(); ++i)
    for (std::size_t j = i + 1; j < hams.size(); ++j) worst = std::max(worst, commutator(hams[i], hams[j]).max_abs());
  return worst / (scale * scale);
}

double max_magnon_violation(std::span<const SpinOperator<Complex>> hams) {
  double worst = 0.0;
  for (const auto& h : hams) {
    auto m = magnon_numbers(site_count(h.rows()));
    for (std::size_t r = 0; r < h.rows(); ++r)
      for (std::size_t c = 0; c < h.cols(); ++c)
        if (m[r] != m[c]) worst = std::max(worst, std::abs(h(r, c)));
  }
  return worst;
}

int JointSpectrum::sector_dimension(int m) const {
  int total = 0;
  for (const auto& r : records)
    if (r.sector == m) total += r.multiplicity;
  return total;
}

double JointSpectrum::distance_to(int m, std::span<const Complex> tuple) const {
  double scale = 1.0;
  for (const auto& v : tuple) scale = std::max(scale, std::abs(v));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.sector != m || r.eigs.size() != tuple.size()) continue;
    double d = 0.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) d = std::max(d, std::abs(r.eigs[i] - tuple[i]));
    best = std::min(best, d / scale);
  }
  return best;
}

namespace {

struct SectorResult {
  std::vector<SpectrumRecord> records;
};

bool tuple_less(const SpectrumRecord& a, const SpectrumRecord& b) {
  for (std::size_t i = 0; i < a.eigs.size(); ++i) {
    const double ar = a.eigs[i].real();
    const double br = b.eigs[i].real();
    if (std::abs(ar - br) > 1e-9 * std::max({1.0, std::abs(ar), std::abs(br)})) return ar < br;
    const double ai = a.eigs[i].imag();
    const double bi = b.eigs[i].imag();
    if (std::abs(ai - bi) > 1e-9 * std::max({1.0, std::abs(ai), std::abs(bi)})) return ai < bi;
  }
  return false;
}

// Joint spectrum of one magnon sector. Returns false when the random
// combination merged distinct joint eigenvalues.
bool diagonalize_sector(const std::vector<Eigen::MatrixXcd>& blocks, double scale, double cluster_tol,
                        std::mt19937_64& rng, int sector, std::vector<SpectrumRecord>& out) {
  const Eigen::Index dim = blocks.front().rows();
  std::uniform_real_distribution<double> coef(0.5, 1.5);
  std::bernoulli_distribution sign(0.5);
  Eigen::MatrixXcd combo = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& b : blocks) combo += (sign(rng) ? 1.0 : -1.0) * coef(rng) * b;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(combo, true);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "sector eigensolver did not converge");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });

  // group eigenvalues of the combination into clusters (single linkage)
  const double tol = cluster_tol * scale;
  std::vector<std::vector<Eigen::Index>> clusters;
  std::vector<bool> taken(static_cast<std::size_t>(dim), false);
  for (std::size_t a = 0; a < order.size(); ++a) {
    if (taken[a]) continue;
    std::vector<Eigen::Index> cl{order[a]};
    taken[a] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t b = 0; b < order.size(); ++b) {
        if (taken[b]) continue;
        for (auto idx : cl) {
          if (std::abs(values(order[b]) - values(idx)) <= tol) {
            cl.push_back(order[b]);
            taken[b] = true;
            grew = true;
            break;
          }
        }
      }
    }
    clusters.push_back(std::move(cl));
  }

  for (const auto& cl : clusters) {
    const Eigen::Index k = static_cast<Eigen::Index>(cl.size());
    Eigen::MatrixXcd v(dim, k);
    for (Eigen::Index c = 0; c < k; ++c) v.col(c) = vectors.col(cl[static_cast<std::size_t>(c)]);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(v);
    SpectrumRecord rec;
    rec.sector = sector;
    rec.multiplicity = static_cast<int>(k);
    for (const auto& b : blocks) {
      // projected action of H on the cluster's span; a joint eigenspace gives h * identity
      Eigen::MatrixXcd hv = b * v;
      Eigen::MatrixXcd proj = cod.solve(hv);
      const Complex h = proj.trace() / static_cast<double>(k);
      const double spread = (proj - h * Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
      const double leak = (hv - v * proj).cwiseAbs().maxCoeff() / std::max(1e-300, v.cwiseAbs().maxCoeff());
      if (spread > 1e3 * tol || leak > 1e3 * tol) return false;
      rec.eigs.push_back(h);
    }
    out.push_back(std::move(rec));
  }
  return true;
}

}  // namespace

JointSpectrum diagonalize_joint(std::span<const SpinOperator<Complex>> hams, const DiagonalizeOptions& opts) {
  if (hams.empty()) throw Error(ErrorCode::InvalidArgument, "no operators to diagonalize");
  const std::size_t dim = hams.front().rows();
  for (const auto& h : hams)
    if (h.rows() != dim || h.cols() != dim) throw Error(ErrorCode::InvalidArgument, "operators differ in dimension");
  const std::size_t n = site_count(dim);
  if (n > max_sites) throw Error(ErrorCode::InvalidArgument, "too many sites");
  if (max_magnon_violation(hams) > 0.0) throw Error(ErrorCode::InvalidArgument, "operators mix magnon sectors");

  double scale = 0.0;
  for (const auto& h : hams) scale = std::max(scale, h.max_abs());
  if (scale == 0.0) scale = 1.0;

  const auto magnons = magnon_numbers(n);
  auto sectors = parallel_map<SectorResult>(n + 1, opts.jobs, [&](std::size_t m) {
    std::vector<std::size_t> basis;
    for (std::size_t r = 0; r < dim; ++r)
      if (magnons[r] == static_cast<int>(m)) basis.push_back(r);
    std::vector<Eigen::MatrixXcd> blocks;
    for (const auto& h : hams) {
      Eigen::MatrixXcd b(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
          b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(basis[i], basis[j]);
      blocks.push_back(std::move(b));
    }
    std::seed_seq seq{static_cast<std::uint32_t>(opts.rng_seed & 0xffffffffu),
                      static_cast<std::uint32_t>(opts.rng_seed >> 32), static_cast<std::uint32_t>(m)};
    std::mt19937_64 rng(seq);
    SectorResult res;
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
      res.records.clear();
      if (diagonalize_sector(blocks, scale, opts.cluster_tol, rng, static_cast<int>(m), res.records)) {
        // records with equal tuples (split clusters of one eigenspace) merge
        std::sort(res.records.begin(), res.records.end(), tuple_less);
        std::vector<SpectrumRecord> merged;
        for (auto& r : res.records) {
          if (!merged.empty() && !tuple_less(merged.back(), r) && !tuple_less(r, merged.back()))
            merged.back().multiplicity += r.multiplicity;
          else
            merged.push_back(std::move(r));
        }
        res.records = std::move(merged);
        return res;
      }
    }
    throw Error(ErrorCode::DegenerateCombination,
                "sector " + std::to_string(m) + ": random combinations kept merging distinct joint eigenvalues");
  });

  JointSpectrum spec;
  spec.sites = n;
  for (auto& s : sectors)
    for (auto& r : s.records) spec.records.push_back(std::move(r));
  return spec;
}

void to_json(nlohmann::json& j, const SpectrumRecord& r) {
  nlohmann::json eigs = nlohmann::json::array();
  for (const auto& v : r.eigs) eigs.push_back(complex_to_json(v));
  j = nlohmann::json{{"sector", r.sector}, {"eigs", eigs}, {"multiplicity", r.multiplicity}};
}

void to_json(nlohmann::json& j, const JointSpectrum& s) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : s.records) recs.push_back(r);
  j = nlohmann::json{{"sites", s.sites}, {"records", recs}};
}

std::string spectrum_csv(const JointSpectrum& s) {
  std::ostringstream out;
  out.precision(17);
  const std::size_t n = s.records.empty() ? 0 : s.records.front().eigs.size();
  bool complex_valued = false;
  for (const auto& r : s.records)
    for (const auto& v : r.eigs)
      if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v))) complex_valued = true;
  out << "sector";
  for (std::size_t i = 1; i <= n; ++i) out << ",H_" << i;
  if (complex_valued)
    for (std::size_t i = 1; i <= n; ++i) out << ",im_H_" << i;
  out << ",multiplicity\n";
  for (const auto& r : s.records) {
    out << r.sector;
    for (const auto& v : r.eigs) out << ',' << v.real();
    if (complex_valued)
      for (const auto& v : r.eigs) out << ',' << v.imag();
    out << ',' << r.multiplicity << '\n';
  }
  return out.str();
}

}  // namespace qcd::quantum

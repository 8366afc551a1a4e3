#include "qcduality/lax.hpp"

#include "qcduality/eigen_bridge.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qcd::lax {

double collision_distance(std::span<const Complex> q, RootSystem kind) {
  const bool bcd = kind != RootSystem::A;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (bcd) d = std::min(d, std::abs(q[i]));
    for (std::size_t k = i + 1; k < q.size(); ++k) {
      d = std::min(d, std::abs(q[i] - q[k]));
      if (bcd) d = std::min(d, std::abs(q[i] + q[k]));
    }
  }
  return d;
}

namespace {

PhasePoint<Complex> axpy(const PhasePoint<Complex>& x, double h, const std::vector<Complex>& dq,
                         const std::vector<Complex>& dp) {
  PhasePoint<Complex> y = x;
  for (std::size_t i = 0; i < y.q.size(); ++i) {
    y.q[i] += h * dq[i];
    y.p[i] += h * dp[i];
  }
  return y;
}

}  // namespace

Trajectory evolve(const PhasePoint<Complex>& start, const Couplings<Complex>& c, double dt, int steps, double guard) {
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be nonnegative");
  if (start.q.size() != start.p.size()) throw Error(ErrorCode::InvalidArgument, "q and p differ in length");
  Trajectory traj;
  traj.t.reserve(static_cast<std::size_t>(steps) + 1);
  traj.points.reserve(static_cast<std::size_t>(steps) + 1);
  PhasePoint<Complex> x = start;
  traj.t.push_back(0.0);
  traj.points.push_back(x);
  for (int s = 0; s < steps; ++s) {
    if (collision_distance(x.q, c.kind) < guard)
      throw Error(ErrorCode::SingularityApproached, "trajectory approached a collision at step " + std::to_string(s));
    auto [k1q, k1p] = equations_of_motion(x, c);
    auto [k2q, k2p] = equations_of_motion(axpy(x, 0.5 * dt, k1q, k1p), c);
    auto [k3q, k3p] = equations_of_motion(axpy(x, 0.5 * dt, k2q, k2p), c);
    auto [k4q, k4p] = equations_of_motion(axpy(x, dt, k3q, k3p), c);
    for (std::size_t i = 0; i < x.q.size(); ++i) {
      x.q[i] += dt / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
      x.p[i] += dt / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
    }
    traj.t.push_back(dt * (s + 1));
    traj.points.push_back(x);
  }
  if (collision_distance(x.q, c.kind) < guard)
    throw Error(ErrorCode::SingularityApproached, "trajectory ended at a collision");
  return traj;
}

std::vector<Complex> spectrum(const Matrix<Complex>& m) {
  if (!m.is_square()) throw Error(ErrorCode::InvalidArgument, "spectrum of a non-square matrix");
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "eigensolver did not converge");
  std::vector<Complex> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
    double ma = std::abs(a);
    double mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12 * std::max({1.0, ma, mb})) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  return ev;
}

double spectrum_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "spectra differ in size");
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      double d = std::abs(x - b[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out.precision(17);
  const std::size_t n = traj.points.empty() ? 0 : traj.points.front().q.size();
  bool complex_valued = false;
  for (const auto& pt : traj.points) {
    for (std::size_t i = 0; i < n; ++i)
      if (pt.q[i].imag() != 0.0 || pt.p[i].imag() != 0.0) complex_valued = true;
  }
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",q_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",p_" << i;
  if (complex_valued) {
    for (std::size_t i = 1; i <= n; ++i) out << ",im_q_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",im_p_" << i;
  }
  out << '\n';
  for (std::size_t s = 0; s < traj.points.size(); ++s) {
    const auto& pt = traj.points[s];
    out << traj.t[s];
    for (const auto& v : pt.q) out << ',' << v.real();
    for (const auto& v : pt.p) out << ',' << v.real();
    if (complex_valued) {
      for (const auto& v : pt.q) out << ',' << v.imag();
      for (const auto& v : pt.p) out << ',' << v.imag();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qcd::lax

#include "bt/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace bt {

double rayleigh_ritz_disk_robin(double alpha, int m, int degree) {
  // f = r^m q(r^2) e^{i m theta}/sqrt(2 pi); in s = r^2:
  //   ||f||^2 = 1/2 int s^m |q|^2, ||grad f||^2 = 1/2 int s^{m-1} (|m q + 2 s q'|^2 + m^2 |q|^2), |f|^2 on the circle = |q(1)|^2.
  const ChebyshevBasis cheb(degree, 0.0, 1.0);
  const QuadratureRule rule = gauss_legendre(2 * degree + m + 8, 0.0, 1.0);
  const RealMat e = cheb.eval_matrix(rule.nodes);
  const RealMat de = e * cheb.derivative();
  const Index p = cheb.size();
  RealMat stiff = RealMat::Zero(p, p), mass = RealMat::Zero(p, p);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Index r = static_cast<Index>(i);
    const double s = rule.nodes[i], w = 0.5 * rule.weights[i];
    const RealVec phi = e.row(r).transpose(), dphi = de.row(r).transpose();
    mass += w * std::pow(s, m) * phi * phi.transpose();
    if (m == 0) {
      stiff += w * 4.0 * s * dphi * dphi.transpose();
    } else {
      const RealVec grad = m * phi + 2.0 * s * dphi;
      stiff += w * std::pow(s, m - 1) * (grad * grad.transpose() + m * m * phi * phi.transpose());
    }
  }
  const RealVec at1 = cheb.eval_row(1.0);
  stiff += alpha * at1 * at1.transpose();
  Eigen::GeneralizedSelfAdjointEigenSolver<RealMat> solver(stiff, mass);
  return solver.eigenvalues().minCoeff();
}

double robin_lower_bound_constant(double alpha_sup) { return std::abs(alpha_sup) + 2.0; }

RegularityEstimate regularity_estimate(const std::vector<int>& modes, const Vec& coefficients) {
  if (modes.size() != static_cast<std::size_t>(coefficients.size()))
    throw ModelError("regularity_estimate: modes and coefficients differ in length");
  std::map<int, double> amplitude;  // |n| -> sqrt(|c_n|^2 + |c_{-n}|^2)
  for (std::size_t i = 0; i < modes.size(); ++i) amplitude[std::abs(modes[i])] += std::norm(coefficients(static_cast<Index>(i)));
  double peak = 0.0;
  for (auto& [n, a] : amplitude) {
    a = std::sqrt(a);
    peak = std::max(peak, a);
  }
  RegularityEstimate out;
  if (peak == 0.0) throw ModelError("regularity_estimate: zero datum");
  const double floor = 1e-13 * peak;
  std::vector<std::pair<int, double>> active;
  int active_total = 0;
  for (const auto& [n, a] : amplitude) {
    if (a <= floor) continue;
    ++active_total;
    if (n >= 1) active.emplace_back(n, a);
  }
  out.active_modes = active_total;
  if (active_total <= 1) {
    out.infinite = true;
    out.sobolev_index = std::numeric_limits<double>::infinity();
    return out;
  }
  if (active.size() < 3) throw ModelError("regularity_estimate: too few active modes for a decay fit");
  // Envelope from the tail keeps parity gaps from biasing the slope.
  for (std::size_t i = active.size() - 1; i-- > 0;) active[i].second = std::max(active[i].second, active[i + 1].second);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(active.size());
  for (const auto& [n, a] : active) {
    const double x = 0.5 * std::log1p(static_cast<double>(n) * n), y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  out.sobolev_index = -slope - 0.5;
  return out;
}

RegularityEstimate regularity_estimate(const DiskModel& model, const Vec& f) {
  return regularity_estimate(model.mode_indices(), Vec(model.trace0(f)));
}

}  // namespace bt

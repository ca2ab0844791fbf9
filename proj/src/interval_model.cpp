#include "bt/models.hpp"

#include "bt/random.hpp"

#include <cmath>
#include <numbers>

namespace bt {

namespace {

// sin(z)/z, entire.
cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

}  // namespace

IntervalModel::IntervalModel(int quad_size, int degree, double eta)
    : cheb_(degree, 0.0, 1.0), quad_(gauss_legendre(quad_size, 0.0, 1.0)), eta_(eta) {
  if (quad_size < 16) throw ModelError("IntervalModel: quadrature size must be at least 16");
  if (2 * quad_size - 1 < 2 * degree) throw ModelError("IntervalModel: quadrature too small for the degree");
  const RealMat e = cheb_.eval_matrix(quad_.nodes);
  const Eigen::Map<const RealVec> w(quad_.weights.data(), static_cast<Index>(quad_.weights.size()));
  gram_ = (e.transpose() * w.asDiagonal() * e).cast<cplx>();
  quad_eval_ = e.cast<cplx>();
  const RealMat& d = cheb_.derivative();
  minus_d2_ = (-(d * d)).cast<cplx>();
  const RealVec at0 = cheb_.eval_row(0.0), at1 = cheb_.eval_row(1.0);
  trace0_.resize(2, cheb_.size());
  trace0_.row(0) = at0.transpose().cast<cplx>();
  trace0_.row(1) = at1.transpose().cast<cplx>();
  trace1_.resize(2, cheb_.size());
  trace1_.row(0) = (at0.transpose() * d).cast<cplx>();
  trace1_.row(1) = (-at1.transpose() * d).cast<cplx>();
}

Mat IntervalModel::resolvent_A0(cplx lambda, const Mat& f) const {
  require_resolvent_point(*this, lambda);
  // Tau method: the equation holds in all but the top two coefficients, which
  // are traded for the Dirichlet conditions.
  const Index n = cheb_.size();
  Mat a = minus_d2_ - lambda * Mat::Identity(n, n);
  a.bottomRows(2) = trace0_;
  Mat rhs = f;
  rhs.bottomRows(2).setZero();
  return a.partialPivLu().solve(rhs);
}

Mat IntervalModel::solutions(cplx lambda) const {
  const cplx k = std::sqrt(lambda);
  Mat s(cheb_.size(), 2);
  s.col(0) = cheb_.interpolate([k](double x) { return std::cos(k * x); });
  s.col(1) = cheb_.interpolate([k](double x) { return x * sinc(k * x); });
  return s;
}

Mat interval_weyl_closed_form(cplx lambda) {
  const cplx k = std::sqrt(lambda);
  const cplx sk = sinc(k);
  const cplx c = std::cos(k);
  Mat m(2, 2);
  m << -c / sk, 1.0 / sk, 1.0 / sk, -c / sk;
  return m;
}

Mat IntervalModel::weyl_matrix(cplx lambda) const { return interval_weyl_closed_form(lambda); }

std::vector<double> IntervalModel::a0_eigenvalues(double a, double b) const {
  std::vector<double> out;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int n = 1;; ++n) {
    const double v = n * n * pi2;
    if (v > b) break;
    if (v >= a) out.push_back(v);
  }
  return out;
}

Mat IntervalModel::sample_domain(std::uint64_t seed, Index count) const {
  Rng rng(seed);
  Mat f = rng.complex_matrix(cheb_.size(), count);
  for (Index k = 0; k < cheb_.size(); ++k) f.row(k) *= std::exp(-k / 3.0);
  return f;
}

}  // namespace bt

#include "bt/chebyshev.hpp"

#include <cmath>
#include <numbers>

namespace bt {

ChebyshevBasis::ChebyshevBasis(int degree, double lo, double hi) : degree_(degree), lo_(lo), hi_(hi) {
  if (degree < 1) throw NumericsError("ChebyshevBasis: degree must be at least 1");
  if (!(lo < hi)) throw NumericsError("ChebyshevBasis: requires lo < hi");
  const int p = degree;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  points_.resize(p + 1);
  for (int j = 0; j <= p; ++j) points_[j] = mid + half * std::cos(std::numbers::pi * j / p);
  points_.front() = hi;
  points_.back() = lo;

  interp_ = RealMat::Zero(p + 1, p + 1);
  for (int k = 0; k <= p; ++k) {
    for (int j = 0; j <= p; ++j) {
      double w = (j == 0 || j == p) ? 0.5 : 1.0;
      interp_(k, j) = 2.0 / p * w * std::cos(std::numbers::pi * j * k / p);
    }
  }
  interp_.row(0) *= 0.5;
  interp_.row(p) *= 0.5;

  // d/dt coefficients: b_{k-1} = b_{k+1} + 2k c_k, with b_0 halved.
  deriv_ = RealMat::Zero(p + 1, p + 1);
  for (int col = 0; col <= p; ++col) {
    RealVec c = RealVec::Zero(p + 1);
    c(col) = 1.0;
    RealVec b = RealVec::Zero(p + 2);
    for (int k = p; k >= 1; --k) b(k - 1) = b(k + 1) + 2.0 * k * c(k);
    b(0) *= 0.5;
    deriv_.col(col) = b.head(p + 1) / half;
  }

  // x T_k = mid T_k + half (T_{k+1} + T_{|k-1|}) / 2.
  times_x_ = RealMat::Zero(p + 1, p + 1);
  for (int k = 0; k <= p; ++k) {
    times_x_(k, k) += mid;
    if (k == 0) {
      times_x_(1, 0) += half;
      continue;
    }
    if (k + 1 <= p) times_x_(k + 1, k) += 0.5 * half;
    times_x_(k - 1, k) += 0.5 * half;
  }
}

RealVec ChebyshevBasis::eval_row(double x) const {
  const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  RealVec row(size());
  row(0) = 1.0;
  row(1) = t;
  for (int k = 2; k <= degree_; ++k) row(k) = 2.0 * t * row(k - 1) - row(k - 2);
  return row;
}

RealMat ChebyshevBasis::eval_matrix(std::span<const double> xs) const {
  RealMat m(static_cast<Index>(xs.size()), size());
  for (std::size_t i = 0; i < xs.size(); ++i) m.row(static_cast<Index>(i)) = eval_row(xs[i]).transpose();
  return m;
}

cplx ChebyshevBasis::eval(const Vec& coeffs, double x) const {
  const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  cplx b1 = 0.0, b2 = 0.0;
  for (Index k = coeffs.size() - 1; k >= 1; --k) {
    const cplx b0 = coeffs(k) + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs(0) + t * b1 - b2;
}

}  // namespace bt

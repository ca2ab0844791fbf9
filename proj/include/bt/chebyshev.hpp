#pragma once

#include "bt/numerics.hpp"

namespace bt {

// Chebyshev polynomial space of fixed degree on [lo, hi]. Functions are
// coefficient vectors c with f(x) = sum_k c_k T_k(t), t = (2x - lo - hi)/(hi - lo).
class ChebyshevBasis {
 public:
  ChebyshevBasis(int degree, double lo, double hi);

  int degree() const { return degree_; }
  Index size() const { return degree_ + 1; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  // Lobatto points, descending from hi to lo.
  const std::vector<double>& points() const { return points_; }
  // Maps samples at points() to coefficients.
  const RealMat& interpolation() const { return interp_; }
  // Coefficient map of d/dx.
  const RealMat& derivative() const { return deriv_; }
  // Coefficient map of multiplication by x; exact for inputs of degree < degree().
  const RealMat& multiply_by_x() const { return times_x_; }

  RealMat eval_matrix(std::span<const double> xs) const;
  RealVec eval_row(double x) const;

  template <typename F>
  Vec interpolate(F&& f) const {
    Vec samples(size());
    for (Index j = 0; j < size(); ++j) samples(j) = f(points_[j]);
    return interp_.cast<cplx>() * samples;
  }

  cplx eval(const Vec& coeffs, double x) const;

 private:
  int degree_;
  double lo_, hi_;
  std::vector<double> points_;
  RealMat interp_, deriv_, times_x_;
};

}  // namespace bt

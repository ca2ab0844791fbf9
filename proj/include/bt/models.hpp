#pragma once

// Laplacian models with exactly known spectral data: -d^2/dx^2 on (0, 1), the
// disk Laplacian in a Fourier truncation, and a truncated transform whose
// Im M(i) degenerates as the truncation grows.

#include "bt/chebyshev.hpp"
#include "bt/triple_core.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bt {

// Interior functions are Chebyshev coefficients on [0, 1].
// G0 f = (f(0), f(1)), G1 f = (f'(0), -f'(1)).
class IntervalModel final : public BoundaryTripleModel {
 public:
  explicit IntervalModel(int quad_size = 512, int degree = 64, double eta = -1.0);

  std::string name() const override { return "interval"; }
  Index boundary_dim() const override { return 2; }
  Index interior_dim() const override { return cheb_.size(); }
  Mat apply_gram(const Mat& f) const override { return gram_ * f; }
  Mat apply_T(const Mat& f) const override { return minus_d2_ * f; }
  Mat trace0(const Mat& f) const override { return trace0_ * f; }
  Mat trace1(const Mat& f) const override { return trace1_ * f; }
  Mat resolvent_A0(cplx lambda, const Mat& f) const override;
  Mat solutions(cplx lambda) const override;
  Mat weyl_matrix(cplx lambda) const override;
  std::vector<double> a0_eigenvalues(double a, double b) const override;
  double eta() const override { return eta_; }
  Mat sample_domain(std::uint64_t seed, Index count) const override;
  Mat domain_basis() const override { return Mat::Identity(interior_dim(), interior_dim()); }

  const ChebyshevBasis& basis() const { return cheb_; }
  const QuadratureRule& quadrature() const { return quad_; }
  template <typename F>
  Vec interpolate(F&& f) const {
    return cheb_.interpolate(std::forward<F>(f));
  }
  cplx evaluate(const Vec& f, double x) const { return cheb_.eval(f, x); }
  // Quadrature samples of f at the nodes of quadrature().
  Vec samples(const Vec& f) const { return quad_eval_ * f; }

 private:
  ChebyshevBasis cheb_;
  QuadratureRule quad_;
  double eta_;
  Mat gram_, minus_d2_, trace0_, trace1_, quad_eval_;
};

// Closed-form Weyl matrix of the interval model.
Mat interval_weyl_closed_form(cplx lambda);

// Fourier modes n = -N..N with unitary angular factors e^{in theta}/sqrt(2 pi).
// Mode n carries f = r^{|n|} q(r^2), q a Chebyshev polynomial on s in [0, 1].
// G0 f = q(1), G1 f = -(|n| q(1) + 2 q'(1)), the negative outward normal derivative.
class DiskModel final : public BoundaryTripleModel {
 public:
  explicit DiskModel(int modes = 16, int radial_quad = 128, int degree = 40, double eta = -1.0,
                     double pole_ceiling = 2500.0);

  std::string name() const override { return "disk"; }
  Index boundary_dim() const override { return 2 * modes_ + 1; }
  Index interior_dim() const override { return boundary_dim() * block_; }
  Mat apply_gram(const Mat& f) const override;
  Mat apply_T(const Mat& f) const override;
  Mat trace0(const Mat& f) const override;
  Mat trace1(const Mat& f) const override;
  Mat resolvent_A0(cplx lambda, const Mat& f) const override;
  Mat solutions(cplx lambda) const override;
  Mat weyl_matrix(cplx lambda) const override;
  std::vector<double> a0_eigenvalues(double a, double b) const override;
  double eta() const override { return eta_; }
  Mat sample_domain(std::uint64_t seed, Index count) const override;
  Mat domain_basis() const override { return Mat::Identity(interior_dim(), interior_dim()); }
  std::vector<int> mode_indices() const override;

  int modes() const { return modes_; }
  Index block_size() const { return block_; }
  Index mode_offset(int n) const { return (n + modes_) * block_; }
  const ChebyshevBasis& radial_basis() const { return cheb_; }

  // Interior function with radial profile q_n(s) placed in mode n.
  Vec mode_function(int n, const Vec& q) const;
  // Value f(r, theta) of an interior function.
  cplx evaluate(const Vec& f, double r, double theta) const;
  // m_n(lambda) = -sqrt(l) J_m'(sqrt(l)) / J_m(sqrt(l)), m = |n|, by continued fraction.
  static cplx mode_weyl(int m, cplx lambda);
  // Squared Bessel zeros j_{m,k}^2 in [a, b].
  static std::vector<double> dirichlet_eigenvalues(int m, double a, double b);

 private:
  int modes_;
  Index block_;
  double eta_;
  ChebyshevBasis cheb_;
  std::vector<Mat> gram_;       // per |n|
  std::vector<Mat> operator_;   // per |n|, T on q
  std::vector<RealVec> dq1_;    // per |n|, row functional q -> -(m q(1) + 2 q'(1))
  RealVec q1_;                  // q -> q(1)
  std::vector<double> pole_cache_;
  double pole_ceiling_;
};

// Fourier coefficients of a real boundary function alpha(theta) = sum_j a_j e^{ij theta};
// index j runs over -J..J with a_{-j} = conj(a_j).
struct BoundaryFunction {
  std::vector<cplx> coefficients;  // size 2J + 1, entry J is a_0
  static BoundaryFunction constant(double value);
  // Step alpha = high on (0, pi), low on (pi, 2 pi), truncated to |j| <= J.
  static BoundaryFunction step(double low, double high, int harmonics);
  int harmonics() const { return static_cast<int>(coefficients.size() / 2); }
  cplx coefficient(int j) const;
  double sup_norm_bound() const;  // sum |a_j|, an upper bound for the sup norm
};

// Multiplication by alpha in the unitary Fourier basis of a disk boundary.
Mat multiplication_matrix(const BoundaryFunction& alpha, int modes);

// Transformed defect triple of a disk truncation: G0' = g_c^+ G0^T,
// G1' = g_c^* G1^T + M g_c^+ G0^T with g_c = (I - w w^*) restricted to the
// first N coordinates and M = diag(1, .., N). Defined on dom T with G0^T f in ran g_c.
class CounterexampleModel final : public BoundaryTripleModel {
 public:
  CounterexampleModel(int truncation, int disk_modes = 16, double eta = -1.0);

  std::string name() const override { return "counterexample"; }
  Index boundary_dim() const override { return truncation_; }
  Index interior_dim() const override { return parent_->interior_dim(); }
  Mat apply_gram(const Mat& f) const override { return parent_->apply_gram(f); }
  Mat apply_T(const Mat& f) const override { return parent_->apply_T(f); }
  Mat trace0(const Mat& f) const override;
  Mat trace1(const Mat& f) const override;
  Mat resolvent_A0(cplx lambda, const Mat& f) const override { return parent_->resolvent_A0(lambda, f); }
  Mat solutions(cplx lambda) const override;
  std::vector<double> a0_eigenvalues(double a, double b) const override { return parent_->a0_eigenvalues(a, b); }
  double eta() const override { return parent_->eta(); }
  Mat sample_domain(std::uint64_t seed, Index count) const override;
  Mat domain_basis() const override;

  const Mat& embedding() const { return gamma_c_; }
  const Mat& coupling() const { return coupling_; }

 private:
  Mat project_to_domain(const Mat& f) const;

  int truncation_;
  std::shared_ptr<const DefectTriple> parent_;
  Mat gamma_c_, gamma_c_pinv_, coupling_;
};

struct CounterexampleStep {
  int truncation;
  double sigma_min;
  double green_residual;
};

std::vector<CounterexampleStep> counterexample_truncation(const std::vector<int>& truncations,
                                                          int disk_modes = 16);

// Separated conditions for -u'' = lambda u on (0, 1), matching G1 u = alpha G0 u for robin.
struct IntervalCondition {
  enum class Kind { dirichlet, neumann, robin } kind = Kind::dirichlet;
  double alpha = 0.0;
};

// Eigenvalues in (a, b) from sign changes of the boundary mismatch of an
// initial value solution integrated by adaptive RK4.
std::vector<double> shooting_oracle(const IntervalCondition& bc, double a, double b, int grid = 400);

// Lowest eigenvalue of the disk Robin problem with constant alpha in mode m,
// by Rayleigh-Ritz over polynomials in r^2 of the given degree.
double rayleigh_ritz_disk_robin(double alpha, int m, int degree = 24);

// Lower bound constant c with ground state >= -c ||alpha||_inf:
// the trace inequality on the unit disk gives c = ||alpha||_inf + 2.
double robin_lower_bound_constant(double alpha_sup);

struct RegularityEstimate {
  double sobolev_index = 0.0;
  bool infinite = false;  // support on a single mode
  int active_modes = 0;
};

// Sobolev index of a boundary datum from the decay of its Fourier coefficients.
RegularityEstimate regularity_estimate(const std::vector<int>& modes, const Vec& coefficients);
RegularityEstimate regularity_estimate(const DiskModel& model, const Vec& f);

}  // namespace bt

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace bt {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

template <typename Scalar>
using MatrixOf = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Relative rank tolerance: singular values below kRankTol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-10;

struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSystemError : NumericsError {
  using NumericsError::NumericsError;
};

template <typename Scalar>
struct HermitianEigen {
  RealVec values;  // ascending
  MatrixOf<Scalar> vectors;
};

template <typename Derived>
auto hermitian_eigen(const Eigen::MatrixBase<Derived>& h, double tol = 1e-10)
    -> HermitianEigen<typename Derived::Scalar> {
  using Scalar = typename Derived::Scalar;
  if (h.rows() != h.cols()) throw NumericsError("hermitian_eigen: matrix is not square");
  const MatrixOf<Scalar> m = h;
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > tol * scale)
    throw NumericsError("hermitian_eigen: matrix is not Hermitian within tolerance");
  if (m.rows() == 0) return {RealVec(0), MatrixOf<Scalar>(0, 0)};
  const MatrixOf<Scalar> sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<MatrixOf<Scalar>> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar>
struct SvdRank {
  Index rank = 0;
  RealVec singular_values;         // descending
  MatrixOf<Scalar> null_basis;     // orthonormal basis of ker A (domain side)
  MatrixOf<Scalar> coimage_basis;  // orthonormal basis of (ker A)^perp (domain side)
  MatrixOf<Scalar> range_basis;    // orthonormal basis of ran A (codomain side)
};

// Singular values above tol * s_max count toward the rank; with relative =
// false the threshold is tol itself, for inputs whose scale is fixed.
template <typename Derived>
auto svd_rank(const Eigen::MatrixBase<Derived>& a, double tol = kRankTol, bool relative = true)
    -> SvdRank<typename Derived::Scalar> {
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0 || a.cols() == 0) throw NumericsError("svd_rank: empty matrix");
  if (!(tol > 0)) throw NumericsError("svd_rank: tolerance must be positive");
  const MatrixOf<Scalar> m = a;
  Eigen::JacobiSVD<MatrixOf<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdRank<Scalar> out;
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  Index r = 0;
  const double threshold = relative ? tol * smax : tol;
  while (r < out.singular_values.size() && smax > 0 && out.singular_values(r) > threshold) ++r;
  out.rank = r;
  out.coimage_basis = svd.matrixV().leftCols(r);
  out.null_basis = svd.matrixV().rightCols(m.cols() - r);
  out.range_basis = svd.matrixU().leftCols(r);
  return out;
}

// Orthonormal basis of the column span.
template <typename Derived>
auto orth(const Eigen::MatrixBase<Derived>& a, double tol = kRankTol) -> MatrixOf<typename Derived::Scalar> {
  if (a.cols() == 0 || a.rows() == 0) return MatrixOf<typename Derived::Scalar>(a.rows(), 0);
  return svd_rank(a, tol).range_basis;
}

// Orthonormal basis of the kernel.
template <typename Derived>
auto null_space(const Eigen::MatrixBase<Derived>& a, double tol = kRankTol) -> MatrixOf<typename Derived::Scalar> {
  using Scalar = typename Derived::Scalar;
  if (a.cols() == 0) return MatrixOf<Scalar>(0, 0);
  if (a.rows() == 0) return MatrixOf<Scalar>::Identity(a.cols(), a.cols());
  return svd_rank(a, tol).null_basis;
}

// Minimal-norm least-squares solution. With exact = true a rank-deficient or
// underdetermined system raises SingularSystemError.
Vec solve_linear(const Mat& a, const Vec& b, double tol = kRankTol, bool exact = false);

struct BesselValue {
  double value;
  double derivative;
};

// J_n(x) and J_n'(x) for 0 <= n <= 200, 0 <= x <= 1e4.
BesselValue bessel_j(int n, double x);

// Square root with Im >= 0; the positive root on the positive real axis.
cplx sqrt_upper(cplx z);

struct RootOptions {
  int grid = 1000;
  double tol = 1e-13;
  double divergence = 1e8;  // brackets with |f| above this on both flanks are poles
};

std::vector<double> find_roots(const std::function<double(double)>& f, double a, double b,
                               const RootOptions& opt = {});

// Roots of every component of a vector-valued function sharing one grid;
// result[j] holds the roots of component j.
std::vector<std::vector<double>> find_roots_branches(const std::function<RealVec(double)>& f, double a,
                                                     double b, const RootOptions& opt = {});

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive, summing to b - a
  double a = 0.0;
  double b = 1.0;
  std::size_t size() const { return nodes.size(); }
};

QuadratureRule gauss_legendre(int n, double a = 0.0, double b = 1.0);

cplx quad_integrate(const QuadratureRule& rule, std::span<const cplx> samples);
double quad_integrate(const QuadratureRule& rule, std::span<const double> samples);

}  // namespace bt

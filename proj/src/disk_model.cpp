#include "bt/models.hpp"

#include "bt/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bt {

DiskModel::DiskModel(int modes, int radial_quad, int degree, double eta, double pole_ceiling)
    : modes_(modes), block_(degree + 1), eta_(eta), cheb_(degree, 0.0, 1.0), pole_ceiling_(pole_ceiling) {
  if (modes < 0 || modes > 128) throw ModelError("DiskModel: mode cutoff must lie in [0, 128]");
  if (radial_quad < degree + 1) throw ModelError("DiskModel: radial quadrature too small for the degree");
  const QuadratureRule rule = gauss_legendre(radial_quad, 0.0, 1.0);
  const RealMat e = cheb_.eval_matrix(rule.nodes);
  const RealMat& d = cheb_.derivative();
  const RealMat& x = cheb_.multiply_by_x();
  const RealVec at1 = cheb_.eval_row(1.0);
  q1_ = at1;
  for (int m = 0; m <= modes_; ++m) {
    RealVec w(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) w(static_cast<Index>(i)) = 0.5 * rule.weights[i] * std::pow(rule.nodes[i], m);
    gram_.push_back((e.transpose() * w.asDiagonal() * e).cast<cplx>());
    operator_.push_back((-(4.0 * x * d * d + 4.0 * (m + 1.0) * d)).cast<cplx>());
    dq1_.push_back(-(m * at1 + 2.0 * (at1.transpose() * d).transpose()));
  }
  for (int m = 0; m <= modes_; ++m) {
    auto z = dirichlet_eigenvalues(m, 0.0, pole_ceiling_);
    pole_cache_.insert(pole_cache_.end(), z.begin(), z.end());
  }
  std::sort(pole_cache_.begin(), pole_cache_.end());
}

std::vector<int> DiskModel::mode_indices() const {
  std::vector<int> out;
  for (int n = -modes_; n <= modes_; ++n) out.push_back(n);
  return out;
}

Mat DiskModel::apply_gram(const Mat& f) const {
  Mat out(f.rows(), f.cols());
  for (int n = -modes_; n <= modes_; ++n)
    out.middleRows(mode_offset(n), block_) = gram_[std::abs(n)] * f.middleRows(mode_offset(n), block_);
  return out;
}

Mat DiskModel::apply_T(const Mat& f) const {
  Mat out(f.rows(), f.cols());
  for (int n = -modes_; n <= modes_; ++n)
    out.middleRows(mode_offset(n), block_) = operator_[std::abs(n)] * f.middleRows(mode_offset(n), block_);
  return out;
}

Mat DiskModel::trace0(const Mat& f) const {
  Mat out(boundary_dim(), f.cols());
  const Eigen::RowVectorXcd row = q1_.transpose().cast<cplx>();
  for (int n = -modes_; n <= modes_; ++n) out.row(n + modes_) = row * f.middleRows(mode_offset(n), block_);
  return out;
}

Mat DiskModel::trace1(const Mat& f) const {
  Mat out(boundary_dim(), f.cols());
  for (int n = -modes_; n <= modes_; ++n)
    out.row(n + modes_) = dq1_[std::abs(n)].transpose().cast<cplx>() * f.middleRows(mode_offset(n), block_);
  return out;
}

Mat DiskModel::resolvent_A0(cplx lambda, const Mat& f) const {
  require_resolvent_point(*this, lambda);
  Mat out(f.rows(), f.cols());
  // Tau method per mode: the top coefficient equation is replaced by q(1) = 0.
  for (int m = 0; m <= modes_; ++m) {
    Mat a = operator_[m] - lambda * Mat::Identity(block_, block_);
    a.row(block_ - 1) = q1_.transpose().cast<cplx>();
    const Eigen::PartialPivLU<Mat> lu(a);
    for (int n : {m, -m}) {
      Mat rhs = f.middleRows(mode_offset(n), block_);
      rhs.row(block_ - 1).setZero();
      out.middleRows(mode_offset(n), block_) = lu.solve(rhs);
      if (m == 0) break;
    }
  }
  return out;
}

Mat DiskModel::solutions(cplx lambda) const {
  const Index g = boundary_dim();
  Mat s = Mat::Zero(interior_dim(), g);
  for (int m = 0; m <= modes_; ++m) {
    // q(s) = sum_j t_j s^j with t_j = t_{j-1} (-lambda/4) / (j (m + j)), proportional to J_m(sqrt(lambda) r) / r^m.
    auto profile = [m, lambda](double x) {
      cplx term = 1.0, sum = 1.0;
      for (int j = 1; j < 400; ++j) {
        term *= -lambda * x / (4.0 * j * (m + j));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && j > 2) break;
      }
      return sum;
    };
    const Vec q = cheb_.interpolate(profile);
    for (int n : {m, -m}) {
      s.block(mode_offset(n), n + modes_, block_, 1) = q;
      if (m == 0) break;
    }
  }
  return s;
}

cplx DiskModel::mode_weyl(int m, cplx lambda) {
  // R_k = lambda / (2k - R_{k+1}) equals sqrt(l) J_k / J_{k-1}; m_n = -m + R_{m+1}.
  const int depth = static_cast<int>(std::max(30.0, 3.0 * std::sqrt(std::abs(lambda)) + 30.0));
  cplx r = 0.0;
  for (int k = m + depth; k >= m + 1; --k) r = lambda / (2.0 * k - r);
  return -static_cast<double>(m) + r;
}

Mat DiskModel::weyl_matrix(cplx lambda) const {
  Mat out = Mat::Zero(boundary_dim(), boundary_dim());
  for (int n = -modes_; n <= modes_; ++n) out(n + modes_, n + modes_) = mode_weyl(std::abs(n), lambda);
  return out;
}

std::vector<double> DiskModel::dirichlet_eigenvalues(int m, double a, double b) {
  if (b <= 0.0 || b < a) return {};
  // Every zero of J_m exceeds m, which also keeps the search away from underflow.
  const double lo = std::max({std::sqrt(std::max(a, 0.0)), static_cast<double>(m), 0.5});
  const double hi = std::sqrt(b);
  if (hi <= lo) return {};
  RootOptions opt;
  opt.grid = std::max(20, static_cast<int>(std::ceil((hi - lo) / 0.1)));
  const auto roots = find_roots([m](double x) { return bessel_j(m, x).value; }, lo, hi, opt);
  std::vector<double> out;
  for (double x : roots) {
    const double v = x * x;
    if (v >= a && v <= b) out.push_back(v);
  }
  return out;
}

std::vector<double> DiskModel::a0_eigenvalues(double a, double b) const {
  std::vector<double> all;
  if (b <= pole_ceiling_) {
    auto lo = std::lower_bound(pole_cache_.begin(), pole_cache_.end(), a);
    auto hi = std::upper_bound(pole_cache_.begin(), pole_cache_.end(), b);
    all.assign(lo, hi);
  } else {
    for (int m = 0; m <= modes_; ++m) {
      auto z = dirichlet_eigenvalues(m, a, b);
      all.insert(all.end(), z.begin(), z.end());
    }
    std::sort(all.begin(), all.end());
  }
  std::vector<double> out;
  for (double v : all)
    if (out.empty() || v - out.back() > 1e-9 * std::max(1.0, v)) out.push_back(v);
  return out;
}

Mat DiskModel::sample_domain(std::uint64_t seed, Index count) const {
  Rng rng(seed);
  Mat f = rng.complex_matrix(interior_dim(), count);
  for (int n = -modes_; n <= modes_; ++n)
    for (Index k = 0; k < block_; ++k) f.row(mode_offset(n) + k) *= std::exp(-k / 2.0) / (1.0 + n * n);
  return f;
}

Vec DiskModel::mode_function(int n, const Vec& q) const {
  if (std::abs(n) > modes_ || q.size() != block_) throw ModelError("mode_function: mode or profile size out of range");
  Vec f = Vec::Zero(interior_dim());
  f.segment(mode_offset(n), block_) = q;
  return f;
}

cplx DiskModel::evaluate(const Vec& f, double r, double theta) const {
  cplx sum = 0.0;
  for (int n = -modes_; n <= modes_; ++n) {
    const Vec q = f.segment(mode_offset(n), block_);
    sum += std::pow(r, std::abs(n)) * cheb_.eval(q, r * r) * std::polar(1.0, n * theta);
  }
  return sum / std::sqrt(2.0 * std::numbers::pi);
}

BoundaryFunction BoundaryFunction::constant(double value) { return {{cplx(value, 0.0)}}; }

BoundaryFunction BoundaryFunction::step(double low, double high, int harmonics) {
  // alpha = (low + high)/2 + (high - low)/2 * sign(sin theta)
  BoundaryFunction out;
  out.coefficients.assign(2 * harmonics + 1, 0.0);
  out.coefficients[harmonics] = 0.5 * (low + high);
  for (int j = 1; j <= harmonics; j += 2) {
    // sign(sin theta) = sum over odd j of 4/(pi j) sin(j theta)
    const cplx c = 0.5 * (high - low) * 4.0 / (std::numbers::pi * j) / cplx(0.0, 2.0);
    out.coefficients[harmonics + j] = c;
    out.coefficients[harmonics - j] = std::conj(c);
  }
  return out;
}

cplx BoundaryFunction::coefficient(int j) const {
  const int h = harmonics();
  if (std::abs(j) > h) return 0.0;
  return coefficients[h + j];
}

double BoundaryFunction::sup_norm_bound() const {
  double s = 0.0;
  for (const cplx& c : coefficients) s += std::abs(c);
  return s;
}

Mat multiplication_matrix(const BoundaryFunction& alpha, int modes) {
  const Index g = 2 * modes + 1;
  Mat out(g, g);
  for (int n = -modes; n <= modes; ++n)
    for (int k = -modes; k <= modes; ++k) out(n + modes, k + modes) = alpha.coefficient(n - k);
  return out;
}

}  // namespace bt

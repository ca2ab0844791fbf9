#include "bt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace bt {

Vec solve_linear(const Mat& a, const Vec& b, double tol, bool exact) {
  if (a.rows() != b.size()) throw NumericsError("solve_linear: dimension mismatch");
  if (a.rows() < a.cols()) throw NumericsError("solve_linear: system is underdetermined");
  if (a.cols() == 0) return Vec(0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  Index r = 0;
  while (r < s.size() && smax > 0 && s(r) > tol * smax) ++r;
  if (exact && r < a.cols()) throw SingularSystemError("solve_linear: singular system");
  Vec coeff = svd.matrixU().leftCols(r).adjoint() * b;
  for (Index i = 0; i < r; ++i) coeff(i) /= s(i);
  return svd.matrixV().leftCols(r) * coeff;
}

namespace {

double bessel_series(int n, double x) {
  if (n < 0) return 0.0;
  const double h = x / 2.0;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= h / k;
  if (term == 0.0) return 0.0;
  double sum = term;
  const double h2 = h * h;
  for (int k = 0; k < 500; ++k) {
    term *= -h2 / ((k + 1.0) * (n + k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > h) break;
  }
  return sum;
}

// J_0 .. J_{top} by backward recurrence normalized with J_0 + 2 sum J_{2k} = 1.
std::vector<double> bessel_miller(int top, double x) {
  const double big = std::max<double>(top, x);
  int start = static_cast<int>(big + 30.0 + 10.0 * std::cbrt(x));
  if (start % 2) ++start;
  std::vector<double> keep(top + 1, 0.0);
  double above = 0.0;   // J_{k+1}
  double cur = 1e-30;   // J_k
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= top) keep[k] = cur;
    if (k % 2 == 0) norm += 2.0 * cur;
    const double below = (2.0 * k / x) * cur - above;
    above = cur;
    cur = below;
    if (std::abs(cur) > 1e250) {
      constexpr double shrink = 1e-250;
      cur *= shrink;
      above *= shrink;
      norm *= shrink;
      for (auto& v : keep) v *= shrink;
    }
  }
  keep[0] = cur;
  norm += cur;
  for (auto& v : keep) v /= norm;
  return keep;
}

}  // namespace

BesselValue bessel_j(int n, double x) {
  if (n < 0 || n > 200) throw NumericsError("bessel_j: order outside [0, 200]");
  if (!(x >= 0.0) || x > 1e4) throw NumericsError("bessel_j: argument outside [0, 1e4]");
  if (x < 12.0) {
    const double v = bessel_series(n, x);
    const double d = n == 0 ? -bessel_series(1, x) : 0.5 * (bessel_series(n - 1, x) - bessel_series(n + 1, x));
    return {v, d};
  }
  const auto j = bessel_miller(n + 1, x);
  const double d = n == 0 ? -j[1] : 0.5 * (j[n - 1] - j[n + 1]);
  return {j[n], d};
}

cplx sqrt_upper(cplx z) {
  cplx r = std::sqrt(z);
  if (r.imag() < 0.0 || (r.imag() == 0.0 && r.real() < 0.0)) r = -r;
  return r;
}

namespace {

int sign_of(double v) { return (v > 0) - (v < 0); }

struct Bracket {
  double lo, hi, flo, fhi;
};

std::optional<double> refine(const std::function<double(double)>& f, Bracket br, const RootOptions& opt) {
  if (std::abs(br.flo) > opt.divergence && std::abs(br.fhi) > opt.divergence) return std::nullopt;
  const double flank = std::max(std::abs(br.flo), std::abs(br.fhi));
  double lo = br.lo, hi = br.hi, flo = br.flo;
  double mid = 0.5 * (lo + hi);
  double fmid = f(mid);
  for (int it = 0; it < 300; ++it) {
    mid = 0.5 * (lo + hi);
    fmid = f(mid);
    if (fmid == 0.0) break;
    if (sign_of(fmid) == sign_of(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    const double width_tol = std::max(opt.tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid));
    if (hi - lo <= width_tol || std::abs(fmid) <= opt.tol * 1e-3) break;
  }
  mid = 0.5 * (lo + hi);
  fmid = f(mid);
  if (!std::isfinite(fmid) || std::abs(fmid) > flank) return std::nullopt;
  return mid;
}

std::vector<double> roots_from_grid(const std::function<double(double)>& f, const std::vector<double>& xs,
                                    const std::vector<double>& fs, const RootOptions& opt) {
  std::vector<double> roots;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (fs[i] == 0.0) roots.push_back(xs[i]);
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!std::isfinite(fs[i]) || !std::isfinite(fs[i + 1])) continue;
    if (sign_of(fs[i]) * sign_of(fs[i + 1]) >= 0) continue;
    if (auto r = refine(f, {xs[i], xs[i + 1], fs[i], fs[i + 1]}, opt)) roots.push_back(*r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> grid_nodes(double a, double b, int grid) {
  if (!(a < b)) throw NumericsError("find_roots: requires a < b");
  if (grid < 1) throw NumericsError("find_roots: grid must be positive");
  std::vector<double> xs(grid + 1);
  for (int i = 0; i <= grid; ++i) xs[i] = a + (b - a) * i / grid;
  xs.back() = b;
  return xs;
}

}  // namespace

std::vector<double> find_roots(const std::function<double(double)>& f, double a, double b, const RootOptions& opt) {
  const auto xs = grid_nodes(a, b, opt.grid);
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);
  return roots_from_grid(f, xs, fs, opt);
}

std::vector<std::vector<double>> find_roots_branches(const std::function<RealVec(double)>& f, double a, double b,
                                                     const RootOptions& opt) {
  const auto xs = grid_nodes(a, b, opt.grid);
  std::vector<RealVec> values(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) values[i] = f(xs[i]);
  const Index branches = values.front().size();
  std::vector<std::vector<double>> out(branches);
  for (Index j = 0; j < branches; ++j) {
    std::vector<double> fs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = values[i](j);
    auto component = [&f, j](double x) { return f(x)(j); };
    out[j] = roots_from_grid(component, xs, fs, opt);
  }
  return out;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw NumericsError("gauss_legendre: need at least one node");
  if (!(a < b)) throw NumericsError("gauss_legendre: requires a < b");
  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[i] = mid - half * z;
    rule.weights[i] = half * 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

cplx quad_integrate(const QuadratureRule& rule, std::span<const cplx> samples) {
  if (samples.size() != rule.size()) throw NumericsError("quad_integrate: sample count does not match the rule");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sum += rule.weights[i] * samples[i];
  return sum;
}

double quad_integrate(const QuadratureRule& rule, std::span<const double> samples) {
  if (samples.size() != rule.size()) throw NumericsError("quad_integrate: sample count does not match the rule");
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sum += rule.weights[i] * samples[i];
  return sum;
}

}  // namespace bt

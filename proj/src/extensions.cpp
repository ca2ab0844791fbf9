#include "bt/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace bt {

namespace {

// Rank tolerance for kernels of Theta - calM(lambda) at numerically located roots.
constexpr double kKernelTol = 1e-8;

Mat stacked_traces(const BoundaryTripleModel& model, const Mat& f) {
  const Index g = model.boundary_dim();
  Mat out(2 * g, f.cols());
  out << model.trace0(f), model.trace1(f);
  return out;
}

// Relative distance of the columns of z from span(basis).
double relation_distance(const Relation& r, const Mat& z) {
  double worst = 0.0;
  for (Index j = 0; j < z.cols(); ++j) {
    const double n = z.col(j).norm();
    if (n == 0.0) continue;
    const Vec rest = z.col(j) - r.basis() * (r.basis().adjoint() * z.col(j));
    worst = std::max(worst, rest.norm() / n);
  }
  return worst;
}

// Theta - calM = {(x, x' - calM x)}.
Relation shifted(const Relation& theta, const Mat& calm, double tol) {
  const Index g = theta.ambient_dim();
  Mat v(2 * g, theta.dim());
  v << theta.top(), theta.bottom() - calm * theta.top();
  return make_relation<cplx>(v, g, tol);
}

}  // namespace

TriplePtr make_ordinary_triple(ModelPtr model, double eta, const GelfandOptions& opt) {
  GelfandScale scale = gelfand_scale(*model, opt);
  return std::make_shared<const OrdinaryTriple>(std::move(model), std::move(scale), eta);
}

ExtensionHandle build_extension(TriplePtr triple, const Relation& theta, std::string label) {
  if (theta.ambient_dim() != triple->boundary_dim()) throw RelationError("build_extension: dimension mismatch");
  ExtensionHandle h;
  h.triple = std::move(triple);
  h.theta = theta;
  h.vartheta = h.triple->to_vartheta(theta);
  h.theta_class = classify(theta);
  h.label = std::move(label);
  h.caveats.push_back("finite truncation: every relation is closed and the two parameter theorems coincide");
  const auto m_rank = svd_rank(h.triple->weyl_eta(), 1e-12);
  if (m_rank.rank < h.triple->boundary_dim())
    h.caveats.push_back("eta is an eigenvalue of A1 = T restricted to ker G1");
  return h;
}

ExtensionHandle build_extension_from_vartheta(TriplePtr triple, const Relation& vartheta, std::string label) {
  const Relation theta = triple->to_theta(vartheta);
  return build_extension(std::move(triple), theta, std::move(label));
}

Relation dirichlet_parameter(Index g) { return multivalued<cplx>(Mat::Identity(g, g)); }

Relation neumann_parameter(Index g) { return graph<cplx>(Mat::Zero(g, g)); }

Relation robin_parameter(const Mat& alpha) { return graph<cplx>(alpha); }

ExtensionHandle robin_extension(TriplePtr triple, double alpha) {
  const Index g = triple->boundary_dim();
  std::ostringstream label;
  label << "robin:" << alpha;
  return build_extension_from_vartheta(triple, robin_parameter(alpha * Mat::Identity(g, g)), label.str());
}

ExtensionHandle robin_extension(TriplePtr triple, const BoundaryFunction& alpha) {
  const Index g = triple->boundary_dim();
  if (g % 2 == 0) throw ModelError("robin_extension: boundary functions need an odd Fourier truncation");
  for (int j = 0; j <= alpha.harmonics(); ++j)
    if (std::abs(alpha.coefficient(j) - std::conj(alpha.coefficient(-j))) > 1e-14)
      throw ModelError("robin_extension: alpha must be real valued");
  const Mat a = multiplication_matrix(alpha, static_cast<int>((g - 1) / 2));
  return build_extension_from_vartheta(triple, robin_parameter(a), "robin:function");
}

ExtensionHandle krein_von_neumann(TriplePtr triple) {
  const Index g = triple->boundary_dim();
  return build_extension(std::move(triple), graph<cplx>(Mat::Zero(g, g)), "kvn");
}

KreinResult krein_resolvent(const ExtensionHandle& h, cplx lambda, const Vec& f) {
  const BoundaryTripleModel& model = h.model();
  const Mat m = weyl(model, lambda).matrix;
  const Relation middle = shifted(h.vartheta, m, h.vartheta.tol());
  const auto point = spectrum_point(middle, cplx(0.0));
  if (point.kind != PointClass::resolvent)
    throw ModelError("krein_resolvent: lambda is not in the resolvent set of the extension");
  const Vec u = model.resolvent_A0(lambda, f);
  const Vec v = model.trace1(u);
  // (x, v + M x) in vartheta with x = X c.
  const Mat x_basis = h.vartheta.top(), xp_basis = h.vartheta.bottom();
  const Vec c = solve_linear(Mat(xp_basis - m * x_basis), v, kRankTol, true);
  const Vec x = x_basis * c;
  KreinResult out;
  out.solution = u + gamma_field(model, lambda, x);
  const Vec residual = model.apply_T(out.solution) - lambda * out.solution - f;
  out.interior_residual = model.norm(residual) / std::max(model.norm(f), 1e-300);
  out.boundary_residual = relation_distance(h.vartheta, stacked_traces(model, out.solution));
  return out;
}

std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::eigenvalue: return "eigenvalue";
    case PointKind::residual: return "residual";
    case PointKind::resolvent: return "resolvent";
    case PointKind::excluded_pole: return "excluded_pole";
  }
  return "unknown";
}

std::string SpectralReport::to_json() const {
  nlohmann::json j;
  j["lambda"] = {lambda.real(), lambda.imag()};
  j["class"] = to_string(kind);
  j["kernel_dim"] = kernel_boundary.cols();
  j["residuals"] = nlohmann::json::object();
  for (const auto& [k, v] : residuals) j["residuals"][k] = v;
  auto cav = caveats;
  if (truncation_caveat) cav.push_back("finite-dimensional truncation: continuous spectrum is not detectable");
  j["caveats"] = cav;
  return j.dump();
}

SpectralReport classify_point(const ExtensionHandle& h, cplx lambda) {
  const BoundaryTripleModel& model = h.model();
  SpectralReport rep;
  rep.lambda = lambda;
  const auto prox = pole_proximity(model, lambda);
  rep.residuals["pole_distance"] = prox.distance;
  if (prox.inside()) {
    rep.kind = PointKind::excluded_pole;
    rep.kernel_boundary = Mat(model.boundary_dim(), 0);
    rep.kernel_functions = Mat(model.interior_dim(), 0);
    rep.caveats.push_back("lambda lies in the spectrum of A0, outside the Weyl characterization");
    return rep;
  }
  const Mat calm = h.triple->calM(lambda);
  const auto point = spectrum_point(shifted(h.theta, calm, kKernelTol), cplx(0.0));
  switch (point.kind) {
    case PointClass::eigenvalue: rep.kind = PointKind::eigenvalue; break;
    case PointClass::residual: rep.kind = PointKind::residual; break;
    case PointClass::resolvent: rep.kind = PointKind::resolvent; break;
  }
  rep.kernel_boundary = point.kernel;
  rep.kernel_functions = h.triple->beta(lambda) * point.kernel;
  if (point.kernel.cols() > 0) {
    // Kernel vectors in (G0, G1) coordinates must satisfy (x, M(lambda) x) in vartheta.
    const Mat x = h.triple->scale().iota_plus * point.kernel;
    const Mat m = weyl(model, lambda).matrix;
    Mat z(2 * x.rows(), x.cols());
    z << x, m * x;
    rep.residuals["kernel_relation"] = relation_distance(h.vartheta, z);
    double interior = 0.0;
    for (Index j = 0; j < rep.kernel_functions.cols(); ++j) {
      const Vec f = rep.kernel_functions.col(j);
      const Vec r = model.apply_T(f) - lambda * f;
      interior = std::max(interior, model.norm(r) / std::max(model.norm(f), 1e-300));
    }
    rep.residuals["eigen_equation"] = interior;
  }
  return rep;
}

namespace {

struct Segment {
  double lo, hi;
};

std::vector<Segment> pole_free_segments(const BoundaryTripleModel& model, double a, double b,
                                        std::vector<double>& poles) {
  poles = model.a0_eigenvalues(a, b);
  std::vector<Segment> out;
  double cursor = a;
  for (double p : poles) {
    // Twice the refusal window, so segment ends are valid evaluation points.
    const double w = 2.0 * std::max(pole_proximity(model, p).window(), 1e-12 * std::max(1.0, std::abs(p)));
    if (p - w > cursor) out.push_back({cursor, p - w});
    cursor = std::max(cursor, p + w);
  }
  if (b > cursor) out.push_back({cursor, b});
  return out;
}

std::vector<std::vector<double>> cluster(std::vector<double> roots) {
  std::sort(roots.begin(), roots.end());
  std::vector<std::vector<double>> groups;
  for (double r : roots) {
    if (!groups.empty() && r - groups.back().back() <= 1e-9 * std::max(1.0, std::abs(r)))
      groups.back().push_back(r);
    else
      groups.push_back({r});
  }
  return groups;
}

// Roots of the signed branch eigenvalues of the compression of Theta - calM to dom Theta.
std::vector<double> selfadjoint_roots(const ExtensionHandle& h, const std::vector<Segment>& segments, double a,
                                      double b, const EigenSearchOptions& opt) {
  const auto sa = selfadjoint_decompose(h.theta);
  if (sa.domain.cols() == 0) return {};
  const Mat q = sa.domain;
  const Mat hq = q.adjoint() * sa.operator_part * q;
  auto branches = [&h, &q, &hq](double l) -> RealVec {
    const Mat s = hq - q.adjoint() * h.triple->calM(cplx(l, 0.0)) * q;
    return hermitian_eigen(Mat((s + s.adjoint()) / 2.0), 1e-6).values;
  };
  std::vector<double> roots;
  for (const auto& seg : segments) {
    RootOptions ro;
    ro.tol = opt.tol;
    ro.grid = std::max(50, static_cast<int>(std::ceil(opt.grid * (seg.hi - seg.lo) / (b - a))));
    ro.divergence = std::numeric_limits<double>::infinity();
    for (const auto& branch : find_roots_branches(branches, seg.lo, seg.hi, ro))
      roots.insert(roots.end(), branch.begin(), branch.end());
  }
  return roots;
}

// Local minima of sigma_min(Theta - calM(lambda)) that reach zero, for general Theta.
std::vector<double> general_roots(const ExtensionHandle& h, const std::vector<Segment>& segments, double a,
                                  double b, const EigenSearchOptions& opt) {
  auto smin = [&h](double l) {
    const Mat calm = h.triple->calM(cplx(l, 0.0));
    const Mat s = h.theta.bottom() - calm * h.theta.top();
    Eigen::JacobiSVD<Mat> svd(s);
    const RealVec& sv = svd.singularValues();
    return sv.size() ? sv(sv.size() - 1) : 0.0;
  };
  std::vector<double> roots;
  for (const auto& seg : segments) {
    const int n = std::max(50, static_cast<int>(std::ceil(opt.grid * (seg.hi - seg.lo) / (b - a))));
    std::vector<double> xs(n + 1), fs(n + 1);
    for (int i = 0; i <= n; ++i) {
      xs[i] = seg.lo + (seg.hi - seg.lo) * i / n;
      fs[i] = smin(xs[i]);
    }
    for (int i = 1; i < n; ++i) {
      if (!(fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1])) continue;
      double lo = xs[i - 1], hi = xs[i + 1];
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 200 && hi - lo > opt.tol; ++it) {
        const double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        if (smin(x1) < smin(x2))
          hi = x2;
        else
          lo = x1;
      }
      const double x = 0.5 * (lo + hi);
      if (smin(x) < 1e-7) roots.push_back(x);
    }
  }
  return roots;
}

}  // namespace

std::vector<EigenvalueHit> eigenvalues_in(const ExtensionHandle& h, double a, double b,
                                          const EigenSearchOptions& opt) {
  if (!(a < b)) throw ModelError("eigenvalues_in: requires a < b");
  const BoundaryTripleModel& model = h.model();
  std::vector<double> poles;
  const auto segments = pole_free_segments(model, a, b, poles);
  const std::vector<double> roots = h.theta_class.self_adjoint ? selfadjoint_roots(h, segments, a, b, opt)
                                                                : general_roots(h, segments, a, b, opt);
  std::vector<EigenvalueHit> hits;
  for (const auto& group : cluster(roots)) {
    double mean = 0.0;
    for (double r : group) mean += r;
    mean /= static_cast<double>(group.size());
    const auto rep = classify_point(h, cplx(mean, 0.0));
    EigenvalueHit hit;
    hit.lambda = mean;
    hit.kernel_boundary = h.triple->scale().iota_plus * rep.kernel_boundary;
    hit.kernel_functions = rep.kernel_functions;
    hit.multiplicity = std::max<Index>(rep.kernel_boundary.cols(), static_cast<Index>(group.size()));
    if (rep.kind != PointKind::eigenvalue) hit.tags.push_back("unconfirmed by classify_point");
    hits.push_back(std::move(hit));
  }
  if (opt.pole_oracle) {
    const Mat proj = h.vartheta.basis() * h.vartheta.basis().adjoint();
    const Index g = model.boundary_dim();
    for (double p : poles) {
      const Mat sols = model.solutions(cplx(p, 0.0));
      const Mat z = stacked_traces(model, sols);
      const Mat off = (Mat::Identity(2 * g, 2 * g) - proj) * z;
      // Columns are normalized so the rank test sees relative sizes.
      Mat zn = off;
      for (Index j = 0; j < zn.cols(); ++j) zn.col(j) /= std::max(z.col(j).norm(), 1e-300);
      const Mat kernel = null_space(zn, kKernelTol);
      if (kernel.cols() == 0) continue;
      Mat coeff = kernel;
      for (Index j = 0; j < coeff.rows(); ++j) coeff.row(j) /= std::max(z.col(j).norm(), 1e-300);
      EigenvalueHit hit;
      hit.lambda = p;
      hit.kernel_functions = sols * coeff;
      hit.kernel_boundary = model.trace0(hit.kernel_functions);
      hit.multiplicity = kernel.cols();
      hit.tags.push_back("outside Weyl characterization");
      hits.push_back(std::move(hit));
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
  return hits;
}

std::string to_string(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::self_adjoint_by_iii: return "self_adjoint";
    case BoundVerdict::essentially_sa_by_wuest: return "essentially_self_adjoint";
    case BoundVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

BoundTestResult selfadjointness_bound_test(const OrdinaryTriple& triple, const Mat& vt, double tol) {
  const Index g = triple.boundary_dim();
  if (vt.rows() != g || vt.cols() != g) throw ModelError("bound test: vartheta must be a g x g operator");
  const Mat& m = triple.weyl_eta();
  if (svd_rank(m, 1e-12).rank < g) throw ModelError("bound test: M(eta) is not invertible");
  const Mat lam_inv = triple.scale().iota_plus * triple.scale().iota_plus;
  const Mat weyl_form = m.adjoint() * lam_inv * m;       // ||M x||_G1^2
  const Mat dual_form = triple.scale().lambda;           // ||x||_G1'^2
  const Mat theta_form = vt.adjoint() * lam_inv * vt;    // ||vt x||_G1^2
  auto herm = [](const Mat& x) { return Mat((x + x.adjoint()) / 2.0); };
  // Levels of |M x| against |x|_G1'; the upper half is where the c2 term must dominate.
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> levels(herm(weyl_form), herm(dual_form));
  const Mat v = levels.eigenvectors();
  const Index tail_start = g / 2;
  const Mat tail = v.rightCols(g - tail_start);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ratio(herm(tail.adjoint() * theta_form * tail),
                                                      herm(tail.adjoint() * weyl_form * tail));
  BoundTestResult out;
  out.c2 = std::sqrt(std::max(0.0, ratio.eigenvalues().maxCoeff()));
  for (Index j = 0; j < g; ++j) {
    const Vec x = v.col(j);
    const double a = std::sqrt(std::max(0.0, (x.adjoint() * theta_form * x)(0).real()));
    const double b = std::sqrt(std::max(0.0, (x.adjoint() * dual_form * x)(0).real()));
    const double d = std::sqrt(std::max(0.0, (x.adjoint() * weyl_form * x)(0).real()));
    if (b > 0.0) out.c1 = std::max(out.c1, (a - out.c2 * d) / b);
  }
  if (out.c2 < 1.0 - tol)
    out.verdict = BoundVerdict::self_adjoint_by_iii;
  else if (std::abs(out.c2 - 1.0) <= tol)
    out.verdict = BoundVerdict::essentially_sa_by_wuest;
  return out;
}

CompactnessReport compactness_diagnostic(const std::vector<int>& truncations, const CompactnessBuilder& build) {
  CompactnessReport rep;
  for (int n : truncations) {
    const auto [triple, vt] = build(n);
    const GelfandScale& s = triple->scale();
    const Mat sigma_sqrt = s.sigma_inv_sqrt.inverse();
    CompactnessLevel level;
    level.truncation = triple->boundary_dim();
    level.singular_values = Eigen::JacobiSVD<Mat>(Mat(s.iota_plus * vt * sigma_sqrt)).singularValues();
    const Mat rel = s.iota_plus * vt * triple->weyl_eta().inverse() * s.iota_minus;
    level.relative_singular_values = Eigen::JacobiSVD<Mat>(rel).singularValues();
    rep.levels.push_back(std::move(level));
  }
  auto decays = [&rep](auto pick) {
    if (rep.levels.size() < 2) return false;
    auto tail = [&pick](const CompactnessLevel& l) {
      const RealVec& sv = pick(l);
      return sv.size() ? sv(sv.size() / 2) : 0.0;
    };
    const double first = tail(rep.levels.front()), last = tail(rep.levels.back());
    const double top = std::max(1.0, pick(rep.levels.back()).size() ? pick(rep.levels.back())(0) : 0.0);
    return last <= 1e-12 * top || last <= 0.75 * first;
  };
  rep.compactness_consistent = decays([](const CompactnessLevel& l) -> const RealVec& { return l.singular_values; });
  rep.relative_compactness_consistent =
      decays([](const CompactnessLevel& l) -> const RealVec& { return l.relative_singular_values; });
  return rep;
}

}  // namespace bt

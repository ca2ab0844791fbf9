#include "bt/triple_core.hpp"

#include "bt/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bt {

namespace {

constexpr cplx kI{0.0, 1.0};

Mat hermitian_part(const Mat& m) { return (m + m.adjoint()) / 2.0; }

Mat imag_part(const Mat& m) { return (m - m.adjoint()) / (2.0 * kI); }

// Hermitian positive definite h -> h^p through its eigen-decomposition.
Mat hermitian_power(const Mat& h, double p) {
  const auto e = hermitian_eigen(h, 1e-8);
  RealVec d = e.values;
  for (Index i = 0; i < d.size(); ++i) d(i) = std::pow(d(i), p);
  return e.vectors * d.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace

Mat BoundaryTripleModel::weyl_matrix(cplx lambda) const { return trace1(gamma_matrix(*this, lambda)); }

cplx BoundaryTripleModel::inner(const Vec& f, const Vec& g) const {
  const Vec gf = apply_gram(f);
  return g.dot(gf);
}

Mat BoundaryTripleModel::inner_matrix(const Mat& f, const Mat& g) const { return g.adjoint() * apply_gram(f); }

double BoundaryTripleModel::norm(const Vec& f) const { return std::sqrt(std::max(0.0, inner(f, f).real())); }

PoleProximity pole_proximity(const BoundaryTripleModel& model, cplx lambda) {
  const double reach = 10.0 + std::abs(lambda);
  const auto poles = model.a0_eigenvalues(lambda.real() - reach, lambda.real() + reach);
  PoleProximity out;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double d = std::abs(lambda - poles[i]);
    if (d >= out.distance) continue;
    out.distance = d;
    out.nearest = poles[i];
    double gap = std::max(1.0, std::abs(poles[i]));  // isolated pole: scale by its size
    if (i > 0) gap = std::min(gap, poles[i] - poles[i - 1]);
    if (i + 1 < poles.size()) gap = std::min(gap, poles[i + 1] - poles[i]);
    out.gap = gap;
  }
  return out;
}

PoleProximity require_resolvent_point(const BoundaryTripleModel& model, cplx lambda) {
  const auto p = pole_proximity(model, lambda);
  if (p.inside()) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " lies within " << p.distance << " of the A0 eigenvalue " << *p.nearest;
    throw PoleError(msg.str());
  }
  return p;
}

double check_green(const BoundaryTripleModel& model, const Mat& fs, const Mat& gs) {
  if (fs.cols() != gs.cols() || fs.rows() != model.interior_dim() || gs.rows() != model.interior_dim())
    throw ModelError("check_green: pair matrices do not match the model");
  const Mat tf = model.apply_T(fs), tg = model.apply_T(gs);
  const Mat f0 = model.trace0(fs), f1 = model.trace1(fs);
  const Mat g0 = model.trace0(gs), g1 = model.trace1(gs);
  const Mat gram_g = model.apply_gram(gs), gram_tg = model.apply_gram(tg);
  double worst = 0.0;
  for (Index j = 0; j < fs.cols(); ++j) {
    const cplx a = gram_g.col(j).dot(tf.col(j));  // (Tf, g)
    const cplx b = gram_tg.col(j).dot(fs.col(j));  // (f, Tg)
    const cplx c = g0.col(j).dot(f1.col(j));       // (G1 f, G0 g)
    const cplx d = g1.col(j).dot(f0.col(j));       // (G0 f, G1 g)
    const double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(a - b - c + d) / scale);
  }
  return worst;
}

Mat gamma_matrix(const BoundaryTripleModel& model, cplx lambda) {
  require_resolvent_point(model, lambda);
  const Mat s = model.solutions(lambda);
  const Mat b = model.trace0(s);
  Eigen::FullPivLU<Mat> lu(b);
  if (!lu.isInvertible()) throw PoleError("gamma_matrix: trace0 is not injective on the solution space");
  return s * lu.inverse();
}

Vec gamma_field(const BoundaryTripleModel& model, cplx lambda, const Vec& phi) {
  if (phi.size() != model.boundary_dim()) throw ModelError("gamma_field: boundary vector has wrong size");
  return gamma_matrix(model, lambda) * phi;
}

Vec gamma_adjoint(const BoundaryTripleModel& model, cplx lambda, const Vec& f) {
  const cplx conj_lambda = std::conj(lambda);
  require_resolvent_point(model, conj_lambda);
  return model.trace1(model.resolvent_A0(conj_lambda, f));
}

WeylSample weyl(const BoundaryTripleModel& model, cplx lambda) {
  const auto p = require_resolvent_point(model, lambda);
  return {lambda, model.weyl_matrix(lambda), p.distance, model.boundary_dim()};
}

double weyl_identity_residual(const BoundaryTripleModel& model, cplx lambda, cplx mu) {
  const Mat ml = weyl(model, lambda).matrix;
  const Mat mm = weyl(model, mu).matrix;
  const Mat mlc = weyl(model, std::conj(lambda)).matrix;
  const Mat gl = gamma_matrix(model, lambda), gm = gamma_matrix(model, mu);
  const Mat gram = model.inner_matrix(gl, gm);  // gamma(mu)^* gamma(lambda)
  const double scale = std::max(1.0, ml.norm());
  const double identity = (ml - mm.adjoint() - (lambda - std::conj(mu)) * gram).norm() / scale;
  const double conjugation = (mlc - ml.adjoint()).norm() / scale;
  return std::max(identity, conjugation);
}

double GelfandScale::norm_g1(const Vec& y) const { return (iota_plus * y).norm(); }
double GelfandScale::norm_g1_dual(const Vec& x) const { return (iota_minus * x).norm(); }
double GelfandScale::norm_g0(const Vec& x) const { return (sigma_inv_sqrt * x).norm(); }

GelfandScale gelfand_scale(const BoundaryTripleModel& model, const GelfandOptions& opt) {
  const Mat m = weyl(model, kI).matrix;
  GelfandScale s;
  s.lambda = hermitian_part(imag_part(m));
  const auto e = hermitian_eigen(s.lambda, 1e-8);
  s.min_eigenvalue = e.values.minCoeff();
  const double max_eig = e.values.maxCoeff();
  s.condition = s.min_eigenvalue > 0.0 ? max_eig / s.min_eigenvalue : std::numeric_limits<double>::infinity();
  if (!(s.min_eigenvalue > 0.0) || s.condition > opt.condition_cap) {
    std::ostringstream msg;
    msg << "Im M(i) is numerically singular: smallest eigenvalue " << s.min_eigenvalue << ", condition "
        << s.condition;
    throw ModelError(msg.str());
  }
  if (s.condition > opt.warn_condition) {
    std::ostringstream msg;
    msg << "Im M(i) is ill-conditioned: condition " << s.condition << ", smallest eigenvalue " << s.min_eigenvalue;
    s.warnings.push_back(msg.str());
  }
  RealVec inv_sqrt(e.values.size()), sqrt_vals(e.values.size());
  for (Index i = 0; i < e.values.size(); ++i) {
    sqrt_vals(i) = std::sqrt(e.values(i));
    inv_sqrt(i) = 1.0 / sqrt_vals(i);
  }
  s.iota_plus = e.vectors * inv_sqrt.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  s.iota_minus = e.vectors * sqrt_vals.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) throw ModelError("M(i) is singular");
  s.sigma = hermitian_part(imag_part(Mat(-lu.inverse())));
  s.sigma_inv_sqrt = hermitian_power(s.sigma, -0.5);
  return s;
}

double duality_residual(const GelfandScale& scale, std::uint64_t seed, int pairs) {
  Rng rng(seed);
  const Index g = scale.lambda.rows();
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Vec x = rng.unit_vector(g), xp = rng.unit_vector(g);
    const Vec left = scale.iota_minus * xp, right = scale.iota_plus * x;
    worst = std::max(worst, std::abs(right.dot(left) - x.dot(xp)));
  }
  return worst;
}

ExtendedTrace extended_trace(const BoundaryTripleModel& model, const Mat& f, double eta) {
  const Mat basis = gamma_matrix(model, eta);
  const Mat f0 = model.resolvent_A0(eta, model.apply_T(f) - eta * f);
  const Mat f_eta = f - f0;
  const Mat gram = hermitian_part(model.inner_matrix(basis, basis));
  const Mat rhs = model.inner_matrix(f_eta, basis);
  ExtendedTrace out;
  out.g0 = gram.ldlt().solve(rhs);
  out.g1 = model.trace1(f0) + model.weyl_matrix(eta) * out.g0;
  return out;
}

RangeDecomposition range_decomposition_check(const BoundaryTripleModel& model, const GelfandScale& scale,
                                             cplx lambda, Index samples, std::uint64_t seed) {
  const Mat f = model.sample_domain(seed, samples);
  const Mat m = weyl(model, lambda).matrix;
  const Mat x = model.trace0(f), xp = model.trace1(f);
  const Mat y = xp - m * x;
  const Mat f0 = f - gamma_matrix(model, lambda) * x;
  const Mat f0_traces0 = model.trace0(f0), f0_traces1 = model.trace1(f0);
  RangeDecomposition out;
  for (Index j = 0; j < f.cols(); ++j) {
    const double scale_j = std::max(1.0, xp.col(j).norm() + (m * x.col(j)).norm());
    const double r = ((y.col(j) - f0_traces1.col(j)).norm() + f0_traces0.col(j).norm()) / scale_j;
    out.reconstruction_residual = std::max(out.reconstruction_residual, r);
    const double fn = std::max(model.norm(f.col(j)), 1e-300);
    out.max_g1_norm = std::max(out.max_g1_norm, scale.norm_g1(y.col(j)) / fn);
  }
  return out;
}

OrdinaryTriple::OrdinaryTriple(ModelPtr model, GelfandScale scale, double eta)
    : model_(std::move(model)), scale_(std::move(scale)), eta_(eta) {
  if (!model_) throw ModelError("OrdinaryTriple: null model");
  weyl_eta_ = hermitian_part(weyl(*model_, eta_).matrix);
  const Index g = model_->boundary_dim();
  const Mat zero = Mat::Zero(g, g);
  block_map_.resize(2 * g, 2 * g);
  block_map_ << scale_.iota_minus, zero, -scale_.iota_plus * weyl_eta_, scale_.iota_plus;
  block_map_inv_.resize(2 * g, 2 * g);
  block_map_inv_ << scale_.iota_plus, zero, weyl_eta_ * scale_.iota_plus, scale_.iota_minus;
}

Mat OrdinaryTriple::ups0(const Mat& f) const { return scale_.iota_minus * extended_trace(*model_, f, eta_).g0; }

Mat OrdinaryTriple::ups1(const Mat& f) const {
  const Mat f0 = model_->resolvent_A0(eta_, model_->apply_T(f) - eta_ * f);
  return scale_.iota_plus * model_->trace1(f0);
}

Mat OrdinaryTriple::ups_formula(const Mat& f) const {
  const Index g = boundary_dim();
  Mat stacked(2 * g, f.cols());
  stacked << model_->trace0(f), model_->trace1(f);
  return block_map_ * stacked;
}

Mat OrdinaryTriple::beta(cplx lambda) const { return gamma_matrix(*model_, lambda) * scale_.iota_plus; }

Mat OrdinaryTriple::calM(cplx lambda) const {
  return scale_.iota_plus * (weyl(*model_, lambda).matrix - weyl_eta_) * scale_.iota_plus;
}

Mat OrdinaryTriple::calM_definition(cplx lambda) const { return ups1(beta(lambda)); }

Index OrdinaryTriple::surjectivity_rank() const { return svd_rank(ups_formula(model_->domain_basis())).rank; }

double OrdinaryTriple::green_residual(const Mat& fs, const Mat& gs) const {
  const Index g = boundary_dim();
  const Mat uf = ups_formula(fs), ug = ups_formula(gs);
  const Mat tf = model_->apply_T(fs), tg = model_->apply_T(gs);
  const Mat gram_g = model_->apply_gram(gs), gram_tg = model_->apply_gram(tg);
  double worst = 0.0;
  for (Index j = 0; j < fs.cols(); ++j) {
    const cplx a = gram_g.col(j).dot(tf.col(j));
    const cplx b = gram_tg.col(j).dot(fs.col(j));
    const cplx c = ug.col(j).head(g).dot(uf.col(j).tail(g));
    const cplx d = ug.col(j).tail(g).dot(uf.col(j).head(g));
    const double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(a - b - c + d) / scale);
  }
  return worst;
}

Relation OrdinaryTriple::to_vartheta(const Relation& theta) const { return transform(theta, block_map_inv_); }

Relation OrdinaryTriple::to_theta(const Relation& vartheta) const { return transform(vartheta, block_map_); }

OrdinaryTriple regularize(ModelPtr model, const GelfandScale& scale, double eta) {
  return OrdinaryTriple(std::move(model), scale, eta);
}

DefectTriple::DefectTriple(ModelPtr parent, double eta) : parent_(std::move(parent)), eta_(eta) {
  if (!parent_) throw ModelError("DefectTriple: null parent");
  const Mat basis = gamma_matrix(*parent_, eta_);
  const Mat gram = hermitian_part(parent_->inner_matrix(basis, basis));
  defect_ = basis * hermitian_power(gram, -0.5);
}

Mat DefectTriple::trace0(const Mat& f) const {
  const Mat f0 = parent_->resolvent_A0(eta_, parent_->apply_T(f) - eta_ * f);
  return parent_->inner_matrix(Mat(f - f0), defect_);
}

Mat DefectTriple::trace1(const Mat& f) const {
  return parent_->inner_matrix(Mat(parent_->apply_T(f) - eta_ * f), defect_);
}

std::shared_ptr<const DefectTriple> defect_triple(ModelPtr model, double eta) {
  return std::make_shared<const DefectTriple>(std::move(model), eta);
}

}  // namespace bt

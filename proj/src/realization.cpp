#include "bt/extensions.hpp"

#include <algorithm>
#include <cmath>

namespace bt {

namespace {

constexpr double kRealizationTol = 1e-9;

RealVec imaginary_eigenvalues(const Mat& c) {
  if (c.rows() == 0) return RealVec(0);
  const Mat im = (c - c.adjoint()) / cplx(0.0, 2.0);
  return hermitian_eigen(Mat((im + im.adjoint()) / 2.0), 1e-6).values;
}

}  // namespace

RealizationContext::RealizationContext(TriplePtr triple) : triple_(std::move(triple)) {
  const BoundaryTripleModel& model = triple_->model();
  const Mat basis = model.domain_basis();
  boundary_ = triple_->ups_formula(basis);
  gram_ = model.inner_matrix(basis, basis);
  gram_ = (gram_ + gram_.adjoint()) / 2.0;
  form_ = model.inner_matrix(model.apply_T(basis), basis);
}

Mat RealizationContext::constrained_domain(const Relation& theta) const {
  const Index n = boundary_.rows();
  const Mat off = (Mat::Identity(n, n) - theta.basis() * theta.basis().adjoint()) * boundary_;
  // Thresholded against the unprojected map: for Theta = C^g x C^g, off is pure rounding.
  if (off.rows() == 0) return Mat::Identity(off.cols(), off.cols());
  return svd_rank(off, kRankTol * std::max(1.0, boundary_.norm()), false).null_basis;
}

Mat RealizationContext::orthonormalize(const Mat& coeffs) const {
  if (coeffs.cols() == 0) return coeffs;
  const Mat g = coeffs.adjoint() * gram_ * coeffs;
  const auto e = hermitian_eigen(Mat((g + g.adjoint()) / 2.0), 1e-6);
  RealVec inv_sqrt = e.values;
  for (Index i = 0; i < inv_sqrt.size(); ++i) inv_sqrt(i) = 1.0 / std::sqrt(inv_sqrt(i));
  return coeffs * e.vectors * inv_sqrt.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

Realization RealizationContext::realize(const Relation& theta) const {
  Realization out;
  const Mat dom = constrained_domain(theta);
  out.domain_dim = dom.cols();
  const Mat q = orthonormalize(dom);
  const Mat c = q.adjoint() * form_ * q;
  const double scale = std::max(1.0, c.norm());
  out.hermitian_residual = (c - c.adjoint()).norm() / scale;

  // Realized adjoint domain: g with (Tf, g) = (f, Tg) for all f in dom.
  const Mat omega = form_ - form_.adjoint();
  const Mat adj = null_space(Mat((omega * dom).adjoint()), 1e-8);
  const Mat adj_expected = constrained_domain(adjoint(theta));
  out.adjoint_residual = subspace_distance(orth(adj), orth(adj_expected));

  const RealVec im = imaginary_eigenvalues(c);
  const double slack = kRealizationTol * scale;
  RelationClass& r = out.realized;
  r.symmetric = out.hermitian_residual <= kRealizationTol;
  r.self_adjoint = r.symmetric && adj.cols() == dom.cols() && subspace_distance(orth(adj), orth(dom)) <= 1e-6;
  r.dissipative = im.size() == 0 || im.minCoeff() >= -slack;
  r.accumulative = im.size() == 0 || im.maxCoeff() <= slack;
  const Mat qa = orthonormalize(adj);
  const Mat ca = qa.adjoint() * form_ * qa;
  const RealVec im_adj = imaginary_eigenvalues(ca);
  const double slack_adj = kRealizationTol * std::max(1.0, ca.norm());
  const bool adj_accumulative = im_adj.size() == 0 || im_adj.maxCoeff() <= slack_adj;
  const bool adj_dissipative = im_adj.size() == 0 || im_adj.minCoeff() >= -slack_adj;
  r.maximal_dissipative = r.dissipative && adj_accumulative;
  r.maximal_accumulative = r.accumulative && adj_dissipative;
  return out;
}

double adjoint_correspondence_check(TriplePtr triple, const Relation& theta) {
  return RealizationContext(std::move(triple)).realize(theta).adjoint_residual;
}

}  // namespace bt

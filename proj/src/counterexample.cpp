#include "bt/models.hpp"

namespace bt {

namespace {

// Boundary coordinate of the k-th sequence entry in the order n = 0, 1, -1, 2, -2, ...
Index mode_slot(Index k, int modes) {
  const Index n = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
  return n + modes;
}

}  // namespace

CounterexampleModel::CounterexampleModel(int truncation, int disk_modes, double eta) : truncation_(truncation) {
  const Index dim = 2 * disk_modes + 1;
  if (truncation < 1 || truncation >= dim)
    throw ModelError("CounterexampleModel: truncation must lie in [1, 2 * disk_modes]");
  parent_ = defect_triple(std::make_shared<DiskModel>(disk_modes), eta);

  Vec w(dim);
  for (Index k = 0; k < dim; ++k) w(k) = std::ldexp(1.0, -static_cast<int>(k + 1));
  w /= w.norm();
  const Mat defect = Mat::Identity(dim, dim) - w * w.adjoint();
  gamma_c_ = Mat::Zero(dim, truncation);
  for (Index k = 0; k < dim; ++k) gamma_c_.row(mode_slot(k, disk_modes)) = defect.row(k).head(truncation);
  gamma_c_pinv_ = (gamma_c_.adjoint() * gamma_c_).ldlt().solve(gamma_c_.adjoint());
  coupling_ = Mat::Zero(truncation, truncation);
  for (int k = 0; k < truncation; ++k) coupling_(k, k) = k + 1.0;
}

Mat CounterexampleModel::trace0(const Mat& f) const { return gamma_c_pinv_ * parent_->trace0(f); }

Mat CounterexampleModel::trace1(const Mat& f) const {
  return gamma_c_.adjoint() * parent_->trace1(f) + coupling_ * gamma_c_pinv_ * parent_->trace0(f);
}

Mat CounterexampleModel::solutions(cplx lambda) const { return gamma_matrix(*parent_, lambda) * gamma_c_; }

Mat CounterexampleModel::project_to_domain(const Mat& f) const {
  const Mat x = parent_->trace0(f);
  const Mat off_range = x - gamma_c_ * (gamma_c_pinv_ * x);
  return f - parent_->defect_basis() * off_range;
}

Mat CounterexampleModel::sample_domain(std::uint64_t seed, Index count) const {
  return project_to_domain(parent_->sample_domain(seed, count));
}

Mat CounterexampleModel::domain_basis() const { return project_to_domain(parent_->domain_basis()); }

std::vector<CounterexampleStep> counterexample_truncation(const std::vector<int>& truncations, int disk_modes) {
  std::vector<CounterexampleStep> out;
  for (int n : truncations) {
    const CounterexampleModel model(n, disk_modes);
    const Mat m = weyl(model, cplx(0.0, 1.0)).matrix;
    const Mat im = (m - m.adjoint()) / cplx(0.0, 2.0);
    const double sigma_min = hermitian_eigen(Mat((im + im.adjoint()) / 2.0), 1e-8).values.minCoeff();
    const Mat fs = model.sample_domain(11, 8), gs = model.sample_domain(12, 8);
    out.push_back({n, sigma_min, check_green(model, fs, gs)});
  }
  return out;
}

}  // namespace bt

#pragma once

// Boundary triples over a finite truncation. Interior functions are coefficient
// vectors in a model-specific basis; boundary vectors live in C^g with the
// Euclidean inner product. All inner products are linear in the first slot.

#include "bt/numerics.hpp"
#include "bt/relations.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bt {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lambda is too close to the spectrum of A0 for a resolvent or Weyl evaluation.
struct PoleError : ModelError {
  using ModelError::ModelError;
};

class BoundaryTripleModel {
 public:
  virtual ~BoundaryTripleModel() = default;

  virtual std::string name() const = 0;
  virtual Index boundary_dim() const = 0;
  virtual Index interior_dim() const = 0;

  // Column-wise maps on interior coefficient matrices.
  virtual Mat apply_gram(const Mat& f) const = 0;
  virtual Mat apply_T(const Mat& f) const = 0;
  virtual Mat trace0(const Mat& f) const = 0;
  virtual Mat trace1(const Mat& f) const = 0;
  // (A0 - lambda)^{-1} with A0 = T restricted to ker trace0.
  virtual Mat resolvent_A0(cplx lambda, const Mat& f) const = 0;
  // interior_dim x g basis of ker(T - lambda); any normalization.
  virtual Mat solutions(cplx lambda) const = 0;
  // M(lambda); the default evaluates trace1 on the gamma field.
  virtual Mat weyl_matrix(cplx lambda) const;
  // Eigenvalues of A0 in [a, b], ascending, without repetition.
  virtual std::vector<double> a0_eigenvalues(double a, double b) const = 0;
  virtual double eta() const = 0;
  // Random smooth elements of dom T, one per column.
  virtual Mat sample_domain(std::uint64_t seed, Index count) const = 0;
  // Spanning family of the truncated dom T.
  virtual Mat domain_basis() const = 0;
  // Fourier index of each boundary coordinate, when the model has one.
  virtual std::vector<int> mode_indices() const { return {}; }

  cplx inner(const Vec& f, const Vec& g) const;
  // Entry (i, j) = (f_j, g_i).
  Mat inner_matrix(const Mat& f, const Mat& g) const;
  double norm(const Vec& f) const;
};

using ModelPtr = std::shared_ptr<const BoundaryTripleModel>;

struct PoleProximity {
  double distance = std::numeric_limits<double>::infinity();  // to the nearest eigenvalue of A0
  double gap = std::numeric_limits<double>::infinity();       // local spacing around it
  std::optional<double> nearest;
  double window() const { return kPoleWindow * gap; }
  bool inside() const { return distance < window(); }
  static constexpr double kPoleWindow = 1e-6;
};

PoleProximity pole_proximity(const BoundaryTripleModel& model, cplx lambda);
// Throws PoleError inside the pole window.
PoleProximity require_resolvent_point(const BoundaryTripleModel& model, cplx lambda);

struct WeylSample {
  cplx lambda;
  Mat matrix;
  double pole_proximity = 0.0;
  Index truncation = 0;
};

// Largest |(Tf,g) - (f,Tg) - (G1 f, G0 g) + (G0 f, G1 g)| over column pairs,
// relative to the sum of the four magnitudes.
double check_green(const BoundaryTripleModel& model, const Mat& fs, const Mat& gs);

// interior_dim x g matrix of gamma(lambda); trace0 of it is the identity.
Mat gamma_matrix(const BoundaryTripleModel& model, cplx lambda);
Vec gamma_field(const BoundaryTripleModel& model, cplx lambda, const Vec& phi);
Vec gamma_adjoint(const BoundaryTripleModel& model, cplx lambda, const Vec& f);
WeylSample weyl(const BoundaryTripleModel& model, cplx lambda);

// max of ||M(l) - M(m)^* - (l - conj m) gamma(m)^* gamma(l)|| and ||M(conj l) - M(l)^*||,
// relative to max(1, ||M(l)||).
double weyl_identity_residual(const BoundaryTripleModel& model, cplx lambda, cplx mu);

struct GelfandScale {
  Mat lambda;      // Im M(i)
  Mat sigma;       // Im(-M(i)^{-1})
  Mat iota_plus;   // Lambda^{-1/2}
  Mat iota_minus;  // Lambda^{1/2}
  Mat sigma_inv_sqrt;
  double min_eigenvalue = 0.0;
  double condition = 0.0;
  std::vector<std::string> warnings;

  double norm_g1(const Vec& y) const;       // ||Lambda^{-1/2} y||
  double norm_g1_dual(const Vec& x) const;  // ||Lambda^{1/2} x||
  double norm_g0(const Vec& x) const;       // ||Sigma^{-1/2} x||
};

struct GelfandOptions {
  double condition_cap = 1e14;
  double warn_condition = 1e6;
};

GelfandScale gelfand_scale(const BoundaryTripleModel& model, const GelfandOptions& opt = {});
// Largest |(iota_- x', iota_+ x) - <x', x>| over random unit pairs.
double duality_residual(const GelfandScale& scale, std::uint64_t seed, int pairs);

struct ExtendedTrace {
  Mat g0;  // one column per input function
  Mat g1;
};

// Extensions of trace0, trace1 through the splitting f = f0 + f_eta with
// f0 in dom A0 and f_eta in N_eta.
ExtendedTrace extended_trace(const BoundaryTripleModel& model, const Mat& f, double eta);

struct RangeDecomposition {
  double reconstruction_residual = 0.0;
  double max_g1_norm = 0.0;  // of y = G1 f - M(lambda) G0 f
};

RangeDecomposition range_decomposition_check(const BoundaryTripleModel& model, const GelfandScale& scale,
                                             cplx lambda, Index samples, std::uint64_t seed);

// Ordinary boundary triple Y0 = iota_- G0~, Y1 = iota_+ G1 f0 built from a
// model, its Gelfand scale and a real base point eta in rho(A0).
class OrdinaryTriple {
 public:
  OrdinaryTriple(ModelPtr model, GelfandScale scale, double eta);

  const BoundaryTripleModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const GelfandScale& scale() const { return scale_; }
  double eta() const { return eta_; }
  Index boundary_dim() const { return model_->boundary_dim(); }
  const Mat& weyl_eta() const { return weyl_eta_; }
  // (Y0; Y1) = block_map * (G0; G1) on dom T.
  const Mat& block_map() const { return block_map_; }
  const Mat& block_map_inverse() const { return block_map_inv_; }

  // Definition path through the f0 / f_eta splitting.
  Mat ups0(const Mat& f) const;
  Mat ups1(const Mat& f) const;
  // Formula path through the block map.
  Mat ups_formula(const Mat& f) const;

  Mat beta(cplx lambda) const;  // gamma(lambda) iota_-^{-1}
  Mat calM(cplx lambda) const;  // iota_+ (M(lambda) - M(eta)) iota_-^{-1}
  Mat calM_definition(cplx lambda) const;  // Y1 beta(lambda)

  Index surjectivity_rank() const;
  double green_residual(const Mat& fs, const Mat& gs) const;

  // Theta (ordinary coordinates) <-> vartheta (coordinates of G0, G1).
  Relation to_vartheta(const Relation& theta) const;
  Relation to_theta(const Relation& vartheta) const;

 private:
  ModelPtr model_;
  GelfandScale scale_;
  double eta_;
  Mat weyl_eta_;
  Mat block_map_, block_map_inv_;
};

OrdinaryTriple regularize(ModelPtr model, const GelfandScale& scale, double eta);

// Triple on dom T whose boundary space is the defect space N_eta, identified
// with C^g unitarily: G0 f = coordinates of f_eta, G1 f = coordinates of
// P_eta (T - eta) f.
class DefectTriple final : public BoundaryTripleModel {
 public:
  DefectTriple(ModelPtr parent, double eta);

  std::string name() const override { return "defect(" + parent_->name() + ")"; }
  Index boundary_dim() const override { return parent_->boundary_dim(); }
  Index interior_dim() const override { return parent_->interior_dim(); }
  Mat apply_gram(const Mat& f) const override { return parent_->apply_gram(f); }
  Mat apply_T(const Mat& f) const override { return parent_->apply_T(f); }
  Mat trace0(const Mat& f) const override;
  Mat trace1(const Mat& f) const override;
  Mat resolvent_A0(cplx lambda, const Mat& f) const override { return parent_->resolvent_A0(lambda, f); }
  Mat solutions(cplx lambda) const override { return parent_->solutions(lambda); }
  std::vector<double> a0_eigenvalues(double a, double b) const override { return parent_->a0_eigenvalues(a, b); }
  double eta() const override { return eta_; }
  Mat sample_domain(std::uint64_t seed, Index count) const override { return parent_->sample_domain(seed, count); }
  Mat domain_basis() const override { return parent_->domain_basis(); }
  std::vector<int> mode_indices() const override { return parent_->mode_indices(); }

  // Orthonormal basis of N_eta, one column per boundary coordinate.
  const Mat& defect_basis() const { return defect_; }

 private:
  ModelPtr parent_;
  double eta_;
  Mat defect_;  // G-orthonormal
};

std::shared_ptr<const DefectTriple> defect_triple(ModelPtr model, double eta);

}  // namespace bt

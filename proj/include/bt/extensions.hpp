#pragma once

// Extensions A_Theta = T restricted to {f : (Y0 f, Y1 f) in Theta} of a
// regularized triple, equivalently {f : (G0 f, G1 f) in vartheta}.

#include "bt/models.hpp"
#include "bt/relations.hpp"
#include "bt/triple_core.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace bt {

using TriplePtr = std::shared_ptr<const OrdinaryTriple>;

TriplePtr make_ordinary_triple(ModelPtr model, double eta, const GelfandOptions& opt = {});

struct ExtensionHandle {
  TriplePtr triple;
  Relation theta;     // in (Y0, Y1) coordinates
  Relation vartheta;  // in (G0, G1) coordinates
  RelationClass theta_class;
  std::string label;
  std::vector<std::string> caveats;

  const BoundaryTripleModel& model() const { return triple->model(); }
  double eta() const { return triple->eta(); }
};

ExtensionHandle build_extension(TriplePtr triple, const Relation& theta, std::string label = "theta");
ExtensionHandle build_extension_from_vartheta(TriplePtr triple, const Relation& vartheta,
                                              std::string label = "vartheta");

// Parameters in (G0, G1) coordinates.
Relation dirichlet_parameter(Index g);  // G0 f = 0
Relation neumann_parameter(Index g);    // G1 f = 0
Relation robin_parameter(const Mat& alpha);  // G1 f = alpha G0 f

ExtensionHandle robin_extension(TriplePtr triple, double alpha);
ExtensionHandle robin_extension(TriplePtr triple, const BoundaryFunction& alpha);
// Theta = 0, so vartheta is the graph of M(eta).
ExtensionHandle krein_von_neumann(TriplePtr triple);

struct KreinResult {
  Vec solution;
  double interior_residual = 0.0;  // ||(T - lambda) g - f|| / ||f||
  double boundary_residual = 0.0;  // distance of (G0 g, G1 g) from vartheta, relative
};

// (A_vartheta - lambda)^{-1} f = (A0 - lambda)^{-1} f + gamma(lambda) (vartheta - M(lambda))^{-1} gamma(conj lambda)^* f.
KreinResult krein_resolvent(const ExtensionHandle& h, cplx lambda, const Vec& f);

enum class PointKind { eigenvalue, residual, resolvent, excluded_pole };
std::string to_string(PointKind k);

struct SpectralReport {
  cplx lambda;
  PointKind kind = PointKind::resolvent;
  Mat kernel_boundary;   // basis of ker(Theta - calM(lambda))
  Mat kernel_functions;  // beta(lambda) applied to it
  std::map<std::string, double> residuals;
  std::vector<std::string> caveats;
  bool truncation_caveat = true;

  std::string to_json() const;
};

SpectralReport classify_point(const ExtensionHandle& h, cplx lambda);

struct EigenvalueHit {
  double lambda = 0.0;
  Index multiplicity = 0;
  Mat kernel_boundary;   // (G0 f) of the eigenfunctions
  Mat kernel_functions;  // interior eigenfunctions
  std::vector<std::string> tags;
};

struct EigenSearchOptions {
  int grid = 2000;
  double tol = 1e-13;
  bool pole_oracle = true;  // also test eigenvalues of A0 through their solution spaces
};

std::vector<EigenvalueHit> eigenvalues_in(const ExtensionHandle& h, double a, double b,
                                          const EigenSearchOptions& opt = {});

enum class BoundVerdict { self_adjoint_by_iii, essentially_sa_by_wuest, inconclusive };
std::string to_string(BoundVerdict v);

struct BoundTestResult {
  BoundVerdict verdict = BoundVerdict::inconclusive;
  double c1 = 0.0;
  double c2 = 0.0;
};

// Smallest c2 (with companion c1) in ||vt x||_G1 <= c1 ||x||_G1' + c2 ||M(eta) x||_G1 on the
// high-frequency half of the truncation; vt is an operator in (G0, G1) coordinates.
BoundTestResult selfadjointness_bound_test(const OrdinaryTriple& triple, const Mat& vt, double tol = 1e-6);

struct CompactnessLevel {
  Index truncation = 0;
  RealVec singular_values;           // of vt, weighted G0 -> G1
  RealVec relative_singular_values;  // of vt M(eta)^{-1}, weighted G1 -> G1
};

struct CompactnessReport {
  std::vector<CompactnessLevel> levels;
  bool compactness_consistent = false;
  bool relative_compactness_consistent = false;
};

// The builder returns the triple and operator vt for a requested truncation.
using CompactnessBuilder = std::function<std::pair<TriplePtr, Mat>(int)>;
CompactnessReport compactness_diagnostic(const std::vector<int>& truncations, const CompactnessBuilder& build);

// Sesquilinear realization of A_Theta on the truncated dom T.
struct Realization {
  RelationClass realized;
  Index domain_dim = 0;
  double hermitian_residual = 0.0;  // ||C - C^*|| / ||C||
  double adjoint_residual = 0.0;    // distance between the realized adjoint domain and dom A_{Theta^*}
};

class RealizationContext {
 public:
  explicit RealizationContext(TriplePtr triple);
  Realization realize(const Relation& theta) const;

 private:
  Mat constrained_domain(const Relation& theta) const;
  Mat orthonormalize(const Mat& coeffs) const;

  TriplePtr triple_;
  Mat boundary_;  // (Y0; Y1) of the domain basis
  Mat gram_;      // Gram matrix of the domain basis
  Mat form_;      // entry (i, j) = (T b_j, b_i)
};

// Distance between the realized adjoint of A_Theta and A_{Theta^*}.
double adjoint_correspondence_check(TriplePtr triple, const Relation& theta);

}  // namespace bt

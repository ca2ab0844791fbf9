#pragma once

// Linear relations in G x G for a finite-dimensional boundary space G = C^g.
// A relation is stored as an orthonormal basis of a subspace of C^{2g}; the
// top g rows hold the first components x, the bottom g rows the second x'.

#include "bt/numerics.hpp"

#include <string>

namespace bt {

struct RelationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
class LinearRelation {
 public:
  using Matrix = MatrixOf<Scalar>;

  LinearRelation() = default;

  Index ambient_dim() const { return g_; }
  Index dim() const { return basis_.cols(); }
  double tol() const { return tol_; }
  const Matrix& basis() const { return basis_; }
  auto top() const { return basis_.topRows(g_); }
  auto bottom() const { return basis_.bottomRows(g_); }

  // Takes an already orthonormal basis; use make_relation for arbitrary spans.
  static LinearRelation from_orthonormal(Index g, Matrix basis, double tol) {
    if (basis.rows() != 2 * g) throw RelationError("relation basis must have 2g rows");
    LinearRelation r;
    r.g_ = g;
    r.basis_ = std::move(basis);
    r.tol_ = tol;
    return r;
  }

 private:
  Index g_ = 0;
  Matrix basis_;
  double tol_ = kRankTol;
};

using Relation = LinearRelation<cplx>;

template <typename Scalar>
LinearRelation<Scalar> make_relation(const MatrixOf<Scalar>& vectors, Index g, double tol = kRankTol) {
  if (vectors.rows() != 2 * g) throw RelationError("make_relation: row count must equal 2g");
  if (vectors.cols() == 0 || vectors.norm() == 0.0)
    return LinearRelation<Scalar>::from_orthonormal(g, MatrixOf<Scalar>(2 * g, 0), tol);
  return LinearRelation<Scalar>::from_orthonormal(g, orth(vectors, tol), tol);
}

// Orthonormal basis of the orthogonal complement of span(q) in C^n.
template <typename Scalar>
MatrixOf<Scalar> complement(const MatrixOf<Scalar>& q, Index n, double tol = kRankTol) {
  if (q.cols() == 0) return MatrixOf<Scalar>::Identity(n, n);
  return null_space(MatrixOf<Scalar>(q.adjoint()), tol);
}

// Largest distance of a unit vector of span(inner) from span(outer); both orthonormal.
template <typename Scalar>
double containment_residual(const MatrixOf<Scalar>& outer, const MatrixOf<Scalar>& inner) {
  if (inner.cols() == 0) return 0.0;
  if (outer.cols() == 0) return 1.0;
  const MatrixOf<Scalar> rest = inner - outer * (outer.adjoint() * inner);
  return rest.operatorNorm();
}

template <typename Scalar>
double subspace_distance(const MatrixOf<Scalar>& a, const MatrixOf<Scalar>& b) {
  if (a.cols() != b.cols()) return 1.0;
  return std::max(containment_residual(a, b), containment_residual(b, a));
}

template <typename Scalar>
bool same_relation(const LinearRelation<Scalar>& a, const LinearRelation<Scalar>& b, double tol) {
  return a.ambient_dim() == b.ambient_dim() && subspace_distance(a.basis(), b.basis()) <= tol;
}

// Orthonormal basis of span(u) intersected with span(w).
template <typename Scalar>
MatrixOf<Scalar> intersect(const MatrixOf<Scalar>& u, const MatrixOf<Scalar>& w, double tol = kRankTol) {
  if (u.cols() == 0 || w.cols() == 0) return MatrixOf<Scalar>(u.rows(), 0);
  MatrixOf<Scalar> stacked(u.rows(), u.cols() + w.cols());
  stacked << u, -w;
  const MatrixOf<Scalar> coeff = null_space(stacked, tol);
  if (coeff.cols() == 0) return MatrixOf<Scalar>(u.rows(), 0);
  return orth(MatrixOf<Scalar>(u * coeff.topRows(u.cols())), tol);
}

template <typename Scalar>
LinearRelation<Scalar> graph(const MatrixOf<Scalar>& op, double tol = kRankTol) {
  if (op.rows() != op.cols()) throw RelationError("graph: operator must be square");
  const Index g = op.rows();
  MatrixOf<Scalar> v(2 * g, g);
  v << MatrixOf<Scalar>::Identity(g, g), op;
  return make_relation<Scalar>(v, g, tol);
}

// Graph of op restricted to span(domain).
template <typename Scalar>
LinearRelation<Scalar> graph_on(const MatrixOf<Scalar>& op, const MatrixOf<Scalar>& domain, double tol = kRankTol) {
  const Index g = op.rows();
  MatrixOf<Scalar> v(2 * g, domain.cols());
  v << domain, op * domain;
  return make_relation<Scalar>(v, g, tol);
}

// {0} x span(mul), purely multivalued.
template <typename Scalar>
LinearRelation<Scalar> multivalued(const MatrixOf<Scalar>& mul, double tol = kRankTol) {
  const Index g = mul.rows();
  MatrixOf<Scalar> v = MatrixOf<Scalar>::Zero(2 * g, mul.cols());
  v.bottomRows(g) = mul;
  return make_relation<Scalar>(v, g, tol);
}

// Image of the relation under a 2g x 2g block map acting on (x, x').
template <typename Scalar>
LinearRelation<Scalar> transform(const LinearRelation<Scalar>& r, const MatrixOf<Scalar>& block_map) {
  if (block_map.rows() != 2 * r.ambient_dim() || block_map.cols() != 2 * r.ambient_dim())
    throw RelationError("transform: block map has wrong size");
  return make_relation<Scalar>(MatrixOf<Scalar>(block_map * r.basis()), r.ambient_dim(), r.tol());
}

template <typename Scalar>
struct RelationParts {
  MatrixOf<Scalar> dom, ran, ker, mul;
};

template <typename Scalar>
RelationParts<Scalar> parts(const LinearRelation<Scalar>& r) {
  using M = MatrixOf<Scalar>;
  const Index g = r.ambient_dim();
  RelationParts<Scalar> p;
  if (r.dim() == 0) {
    p.dom = p.ran = p.ker = p.mul = M(g, 0);
    return p;
  }
  const M x = r.top(), xp = r.bottom();
  p.dom = orth(x, r.tol());
  p.ran = orth(xp, r.tol());
  const M null_top = null_space(x, r.tol());
  const M null_bottom = null_space(xp, r.tol());
  p.mul = null_top.cols() ? orth(M(xp * null_top), r.tol()) : M(g, 0);
  p.ker = null_bottom.cols() ? orth(M(x * null_bottom), r.tol()) : M(g, 0);
  return p;
}

template <typename Scalar>
LinearRelation<Scalar> inverse(const LinearRelation<Scalar>& r) {
  const Index g = r.ambient_dim();
  MatrixOf<Scalar> v(2 * g, r.dim());
  v << r.bottom(), r.top();
  return LinearRelation<Scalar>::from_orthonormal(g, std::move(v), r.tol());
}

namespace detail {

// Basis of {(a, b, c)} in C^{3g} with (a, b) in r and c free, placed at the
// given block positions.
template <typename Scalar>
MatrixOf<Scalar> lift(const LinearRelation<Scalar>& r, int first, int second) {
  const Index g = r.ambient_dim();
  const int free = 3 - first - second;
  MatrixOf<Scalar> v = MatrixOf<Scalar>::Zero(3 * g, r.dim() + g);
  v.block(first * g, 0, g, r.dim()) = r.top();
  v.block(second * g, 0, g, r.dim()) = r.bottom();
  v.block(free * g, r.dim(), g, g) = MatrixOf<Scalar>::Identity(g, g);
  return orth(v, r.tol());
}

}  // namespace detail

// {(x, x' + x'') : (x, x') in a, (x, x'') in b}
template <typename Scalar>
LinearRelation<Scalar> sum(const LinearRelation<Scalar>& a, const LinearRelation<Scalar>& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw RelationError("sum: dimension mismatch");
  const Index g = a.ambient_dim();
  const MatrixOf<Scalar> common = intersect(detail::lift(a, 0, 1), detail::lift(b, 0, 2), a.tol());
  MatrixOf<Scalar> v(2 * g, common.cols());
  v << common.topRows(g), common.middleRows(g, g) + common.bottomRows(g);
  return make_relation<Scalar>(v, g, a.tol());
}

// second * first = {(x, x'') : (x, x') in first, (x', x'') in second}
template <typename Scalar>
LinearRelation<Scalar> product(const LinearRelation<Scalar>& second, const LinearRelation<Scalar>& first) {
  if (first.ambient_dim() != second.ambient_dim()) throw RelationError("product: dimension mismatch");
  const Index g = first.ambient_dim();
  const MatrixOf<Scalar> common = intersect(detail::lift(first, 0, 1), detail::lift(second, 1, 2), first.tol());
  MatrixOf<Scalar> v(2 * g, common.cols());
  v << common.topRows(g), common.bottomRows(g);
  return make_relation<Scalar>(v, g, first.tol());
}

// Theta* = (J Theta)^perp with J(x, x') = (x', -x).
template <typename Scalar>
LinearRelation<Scalar> adjoint(const LinearRelation<Scalar>& r) {
  const Index g = r.ambient_dim();
  MatrixOf<Scalar> jv(2 * g, r.dim());
  jv << r.bottom(), -r.top();
  return LinearRelation<Scalar>::from_orthonormal(g, complement<Scalar>(jv, 2 * g, r.tol()), r.tol());
}

struct RelationClass {
  bool symmetric = false;
  bool self_adjoint = false;
  bool dissipative = false;
  bool accumulative = false;
  bool maximal_dissipative = false;
  bool maximal_accumulative = false;

  bool operator==(const RelationClass&) const = default;
};

std::string to_string(const RelationClass& c);

// Counted as nonnegative down to this value of the compressed form Im(x', x).
inline constexpr double kFormSlack = 1e-10;

// Hermitian d x d matrix of the form (x, x') -> Im(x', x) on the basis of r.
template <typename Scalar>
MatrixOf<Scalar> imaginary_form(const LinearRelation<Scalar>& r) {
  const MatrixOf<Scalar> cross = r.top().adjoint() * r.bottom();
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    return (cross - cross.adjoint()) / Scalar(0.0, 2.0);
  } else {
    return MatrixOf<Scalar>::Zero(cross.rows(), cross.cols());
  }
}

template <typename Scalar>
RelationClass classify(const LinearRelation<Scalar>& r) {
  RelationClass c;
  const Index g = r.ambient_dim();
  const auto star = adjoint(r);
  c.symmetric = containment_residual(star.basis(), r.basis()) <= std::max(r.tol(), 1e-9);
  c.self_adjoint = c.symmetric && star.dim() == r.dim();
  if (r.dim() == 0) {
    c.dissipative = c.accumulative = true;
  } else {
    const RealVec eig = hermitian_eigen(imaginary_form(r), 1e-8).values;
    c.dissipative = eig.minCoeff() >= -kFormSlack;
    c.accumulative = eig.maxCoeff() <= kFormSlack;
  }
  c.maximal_dissipative = c.dissipative && r.dim() == g;
  c.maximal_accumulative = c.accumulative && r.dim() == g;
  return c;
}

enum class PointClass { eigenvalue, residual, resolvent };

std::string to_string(PointClass c);

template <typename Scalar>
struct PointSpectrum {
  PointClass kind = PointClass::resolvent;
  MatrixOf<Scalar> kernel;  // orthonormal basis of ker(Theta - lambda)
  Index range_dim = 0;      // dim ran(Theta - lambda)
  // Continuous spectrum cannot occur at finite dimension; reports carry this flag.
  bool finite_dimensional_caveat = true;
};

template <typename Scalar>
PointSpectrum<Scalar> spectrum_point(const LinearRelation<Scalar>& r, Scalar lambda) {
  const Index g = r.ambient_dim();
  PointSpectrum<Scalar> out;
  if (r.dim() == 0) {
    out.kernel = MatrixOf<Scalar>(g, 0);
    out.kind = g == 0 ? PointClass::resolvent : PointClass::residual;
    return out;
  }
  const MatrixOf<Scalar> shifted = r.bottom() - lambda * r.top();
  // The basis is orthonormal, so the threshold is absolute: a uniformly small
  // block is a kernel, not a well conditioned map.
  const auto s = svd_rank(shifted, r.tol(), false);
  const MatrixOf<Scalar> null_coeff = s.null_basis;
  out.kernel = null_coeff.cols() ? orth(MatrixOf<Scalar>(r.top() * null_coeff), r.tol()) : MatrixOf<Scalar>(g, 0);
  // Columns of the basis on which both blocks vanish cannot occur for an orthonormal basis.
  out.range_dim = s.rank;
  if (out.kernel.cols() > 0)
    out.kind = PointClass::eigenvalue;
  else if (out.range_dim < g)
    out.kind = PointClass::residual;
  else
    out.kind = PointClass::resolvent;
  return out;
}

template <typename Scalar>
struct SelfAdjointParts {
  MatrixOf<Scalar> operator_part;  // g x g, Hermitian, vanishes on the multivalued part
  MatrixOf<Scalar> domain;         // orthonormal basis of dom Theta
  MatrixOf<Scalar> multivalued;    // orthonormal basis of mul Theta
  MatrixOf<Scalar> compressed() const { return domain.adjoint() * operator_part * domain; }
};

template <typename Scalar>
SelfAdjointParts<Scalar> selfadjoint_decompose(const LinearRelation<Scalar>& r) {
  if (!classify(r).self_adjoint) throw RelationError("selfadjoint_decompose: relation is not self-adjoint");
  const Index g = r.ambient_dim();
  const auto p = parts(r);
  SelfAdjointParts<Scalar> out;
  out.domain = p.dom;
  out.multivalued = p.mul;
  // For (x, x') in r the component of x' along dom is single valued.
  const MatrixOf<Scalar> proj = p.dom * p.dom.adjoint();
  const MatrixOf<Scalar> x = r.top();
  const MatrixOf<Scalar> xp = proj * r.bottom();
  const auto s = svd_rank(x, r.tol());
  MatrixOf<Scalar> pinv = MatrixOf<Scalar>::Zero(x.cols(), g);
  for (Index i = 0; i < s.rank; ++i)
    pinv += s.coimage_basis.col(i) * s.range_basis.col(i).adjoint() / s.singular_values(i);
  MatrixOf<Scalar> op = xp * pinv * proj;
  out.operator_part = (op + op.adjoint()) / 2.0;
  return out;
}

// The relation {(x, h x + m) : x in domain, m in multivalued}.
template <typename Scalar>
LinearRelation<Scalar> reassemble(const SelfAdjointParts<Scalar>& p, double tol = kRankTol) {
  const Index g = p.operator_part.rows();
  MatrixOf<Scalar> v = MatrixOf<Scalar>::Zero(2 * g, p.domain.cols() + p.multivalued.cols());
  v.topLeftCorner(g, p.domain.cols()) = p.domain;
  v.bottomLeftCorner(g, p.domain.cols()) = p.operator_part * p.domain;
  v.bottomRightCorner(g, p.multivalued.cols()) = p.multivalued;
  return make_relation<Scalar>(v, g, tol);
}

// Values of an operator relation: x' with (x, x') in r, for x in dom r.
template <typename Scalar>
MatrixOf<Scalar> apply_operator(const LinearRelation<Scalar>& r, const MatrixOf<Scalar>& xs, double tol = 1e-8) {
  const auto p = parts(r);
  if (p.mul.cols() != 0) throw RelationError("apply_operator: relation is multivalued");
  const MatrixOf<Scalar> x = r.top();
  MatrixOf<Scalar> out(r.ambient_dim(), xs.cols());
  Eigen::CompleteOrthogonalDecomposition<MatrixOf<Scalar>> cod(x);
  const MatrixOf<Scalar> coeff = cod.solve(xs);
  if ((x * coeff - xs).norm() > tol * std::max(1.0, xs.norm()))
    throw RelationError("apply_operator: argument outside the domain");
  return r.bottom() * coeff;
}

// Operator matrix of a relation that is the graph of an everywhere defined operator.
template <typename Scalar>
MatrixOf<Scalar> as_operator(const LinearRelation<Scalar>& r) {
  const Index g = r.ambient_dim();
  return apply_operator(r, MatrixOf<Scalar>(MatrixOf<Scalar>::Identity(g, g)));
}

// Residuals of the identities every closed relation satisfies.
struct AxiomResiduals {
  double double_adjoint = 0.0;  // distance of r** from r
  Index dimension_defect = 0;   // |dim r + dim r* - 2g|
  double adjoint_mul = 0.0;     // distance of mul r* from (dom r)^perp
  double double_inverse = 0.0;  // distance of (r^-1)^-1 from r

  bool pass(double tol) const {
    return double_adjoint <= tol && dimension_defect == 0 && adjoint_mul <= tol && double_inverse <= tol;
  }
};

template <typename Scalar>
AxiomResiduals axiom_residuals(const LinearRelation<Scalar>& r) {
  const Index g = r.ambient_dim();
  const auto star = adjoint(r);
  AxiomResiduals out;
  out.double_adjoint = subspace_distance(adjoint(star).basis(), r.basis());
  out.dimension_defect = std::abs(r.dim() + star.dim() - 2 * g);
  out.adjoint_mul = subspace_distance(parts(star).mul, complement<Scalar>(parts(r).dom, g, r.tol()));
  out.double_inverse = subspace_distance(inverse(inverse(r)).basis(), r.basis());
  return out;
}

}  // namespace bt

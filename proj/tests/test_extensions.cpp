#include "bt/extensions.hpp"
#include "bt/models.hpp"
#include "bt/random.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bt {
namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

ModelPtr interval() {
  static ModelPtr m = std::make_shared<const IntervalModel>();
  return m;
}

ModelPtr small_disk() {
  static ModelPtr m = std::make_shared<const DiskModel>(4);
  return m;
}

TriplePtr interval_triple() {
  static TriplePtr t = make_ordinary_triple(interval(), -1.0);
  return t;
}

std::vector<double> lambdas(const std::vector<EigenvalueHit>& hits) {
  std::vector<double> out;
  for (const auto& h : hits) out.push_back(h.lambda);
  return out;
}

TEST(Extension, DirichletSpectrumIsTheSquaredMultiplesOfPi) {
  const auto h = build_extension_from_vartheta(interval_triple(), dirichlet_parameter(2));
  const auto hits = eigenvalues_in(h, 0.0, 160.0);
  ASSERT_EQ(hits.size(), 4u);
  for (std::size_t n = 0; n < hits.size(); ++n) {
    EXPECT_NEAR(hits[n].lambda, (n + 1.0) * (n + 1.0) * kPi2, 1e-8);
    EXPECT_EQ(hits[n].multiplicity, 1);
  }
}

TEST(Extension, DirichletPolesNeedTheOracle) {
  // Without the pole oracle every Dirichlet eigenvalue is invisible to the Weyl function.
  const auto h = build_extension_from_vartheta(interval_triple(), dirichlet_parameter(2));
  EigenSearchOptions opt;
  opt.pole_oracle = false;
  EXPECT_TRUE(eigenvalues_in(h, 0.0, 50.0, opt).empty());
}

TEST(Extension, NeumannSpectrumIncludesZero) {
  const auto h = build_extension_from_vartheta(interval_triple(), neumann_parameter(2));
  const auto got = lambdas(eigenvalues_in(h, -1.0, 50.0));
  ASSERT_EQ(got.size(), 3u);
  EXPECT_NEAR(got[0], 0.0, 1e-8);
  EXPECT_NEAR(got[1], kPi2, 1e-8);
  EXPECT_NEAR(got[2], 4.0 * kPi2, 1e-8);
}

TEST(Extension, IntervalRobinMatchesSecularEquation) {
  for (double alpha : {1.0, 4.0}) {
    const auto got = lambdas(eigenvalues_in(robin_extension(interval_triple(), alpha), 0.0, 100.0));
    const auto expected = oracle::interval_robin_eigenvalues(alpha, 100.0);
    ASSERT_EQ(got.size(), expected.size()) << alpha;
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-7) << alpha;
  }
}

TEST(Extension, EigenfunctionsSatisfyTheBoundaryCondition) {
  const auto h = robin_extension(interval_triple(), 2.0);
  const auto& m = h.model();
  for (const auto& hit : eigenvalues_in(h, 0.0, 60.0)) {
    const Vec f = hit.kernel_functions.col(0);
    const Vec r = m.apply_T(f) - hit.lambda * f;
    EXPECT_LE(m.norm(r), 1e-6 * m.norm(f));
    EXPECT_LE((m.trace1(f) - 2.0 * m.trace0(f)).norm(), 1e-7 * m.trace0(f).norm());
  }
}

TEST(Extension, DiskRobinMatchesBesselSecularRoots) {
  const auto triple = make_ordinary_triple(small_disk(), -1.0);
  const auto hits = eigenvalues_in(robin_extension(triple, 1.0), 0.0, 40.0);
  const auto expected = oracle::disk_robin_eigenvalues(1.0, 4, 40.0);
  std::vector<oracle::Eigenvalue> merged = expected;
  std::sort(merged.begin(), merged.end(), [](auto a, auto b) { return a.lambda < b.lambda; });
  // Distinct modes never share a root here, so counts add up.
  ASSERT_EQ(hits.size(), merged.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    EXPECT_NEAR(hits[i].lambda, merged[i].lambda, 1e-7);
    EXPECT_EQ(hits[i].multiplicity, merged[i].multiplicity);
  }
}

TEST(Extension, NonSelfAdjointParameterFindsRealRoots) {
  // vartheta = graph of a real non-symmetric matrix: real roots of det(M(l) - B).
  Mat b(2, 2);
  b << 1.0, 3.0, 0.0, 2.0;
  const auto h = build_extension_from_vartheta(interval_triple(), robin_parameter(b));
  EXPECT_FALSE(h.theta_class.symmetric);
  const auto got = lambdas(eigenvalues_in(h, 0.0, 60.0));
  auto det = [&b](double l) { return (interval_weyl_closed_form(l) - b).determinant().real(); };
  std::vector<double> expected;
  // Sign changes across the poles of det are excluded by the residual test below.
  for (double r : oracle::bisect_all(det, 0.0, 60.0, 6000))
    if (std::abs(det(r + 1e-9) - det(r - 1e-9)) < 1.0) expected.push_back(r);
  // At l = (k pi)^2 det(M - B) has a pole; solve Gamma1 f = B Gamma0 f on span{sin, cos} directly.
  for (int k = 1; k * k * 9.8696 < 60.0; ++k) {
    const double w = k * std::numbers::pi, sgn = (k % 2 == 0) ? 1.0 : -1.0;
    Mat sys(2, 2);
    for (int j = 0; j < 2; ++j) {
      // j = 0: sin(w x), j = 1: cos(w x).
      const Eigen::Vector2cd g0(j == 0 ? 0.0 : 1.0, j == 0 ? 0.0 : sgn);
      const Eigen::Vector2cd g1(j == 0 ? w : 0.0, j == 0 ? -w * sgn : 0.0);
      sys.col(j) = g1 - b * g0;
    }
    if (std::abs(sys.determinant()) < 1e-9) expected.push_back(w * w);
  }
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-7);
}

TEST(Extension, KreinVonNeumannKernelAtTheBasePoint) {
  const auto kv = krein_von_neumann(make_ordinary_triple(interval(), 0.0));
  const auto rep = classify_point(kv, 0.0);
  EXPECT_EQ(rep.kind, PointKind::eigenvalue);
  EXPECT_EQ(rep.kernel_boundary.cols(), 2);
  // eta = 0 is an eigenvalue of the Neumann realization.
  bool flagged = false;
  for (const auto& c : kv.caveats) flagged = flagged || c.find("A1") != std::string::npos;
  EXPECT_TRUE(flagged);
}

TEST(Extension, KreinVonNeumannOnTheDiskHasFullDefect) {
  const auto triple = make_ordinary_triple(small_disk(), -1.0);
  const auto rep = classify_point(krein_von_neumann(triple), -1.0);
  EXPECT_EQ(rep.kernel_boundary.cols(), small_disk()->boundary_dim());
}

TEST(Extension, ClassifyPointReportsResolventAndPoles) {
  const auto h = robin_extension(interval_triple(), 1.0);
  EXPECT_EQ(classify_point(h, cplx(5.0, 1.0)).kind, PointKind::resolvent);
  EXPECT_EQ(classify_point(h, kPi2).kind, PointKind::excluded_pole);
  const std::string json = classify_point(h, 5.0).to_json();
  EXPECT_NE(json.find("continuous spectrum"), std::string::npos);
}

TEST(Krein, ResolventResidualsAreSmall) {
  Rng rng(30);
  const auto& m = *interval();
  const Mat fs = m.sample_domain(31, 3);
  std::vector<ExtensionHandle> hs{robin_extension(interval_triple(), 1.0),
                                  robin_extension(interval_triple(), -2.0),
                                  build_extension(interval_triple(), graph(rng.hermitian(2)))};
  for (const auto& h : hs)
    for (int k = 0; k < 3; ++k) {
      const cplx l(rng.uniform(-20.0, 80.0), rng.uniform(0.5, 2.0) * (k % 2 ? -1.0 : 1.0));
      const KreinResult r = krein_resolvent(h, l, fs.col(k));
      EXPECT_LE(r.interior_residual, 1e-6) << h.label;
      EXPECT_LE(r.boundary_residual, 1e-9) << h.label;
    }
}

TEST(Krein, RefusesEigenvalues) {
  const auto h = robin_extension(interval_triple(), 1.0);
  const double ev = eigenvalues_in(h, 0.0, 5.0).at(0).lambda;
  EXPECT_THROW(krein_resolvent(h, ev, interval()->sample_domain(1, 1).col(0)), ModelError);
}

TEST(BoundTest, ScalesOfTheWeylFunction) {
  const auto triple = make_ordinary_triple(small_disk(), -1.0);
  for (double a : {0.25, 0.5}) {
    const auto r = selfadjointness_bound_test(*triple, a * triple->weyl_eta());
    EXPECT_NEAR(r.c2, a, 0.02);
    EXPECT_EQ(r.verdict, BoundVerdict::self_adjoint_by_iii);
  }
  const auto one = selfadjointness_bound_test(*triple, triple->weyl_eta());
  EXPECT_NEAR(one.c2, 1.0, 0.02);
  EXPECT_EQ(one.verdict, BoundVerdict::essentially_sa_by_wuest);
  // A Robin coefficient alpha gives c2 near alpha over the smallest upper-half level (about 2 at N = 4).
  const Index g = triple->boundary_dim();
  EXPECT_LT(selfadjointness_bound_test(*triple, Mat(1.0 * Mat::Identity(g, g))).c2, 1.0);
}

TEST(Compactness, RobinIsCompactAndWeylMultipleIsNot) {
  auto build = [](double scale_of_weyl) {
    return [scale_of_weyl](int n) {
      const auto t = make_ordinary_triple(std::make_shared<const DiskModel>(n, 64, 24), -1.0);
      const Index g = t->boundary_dim();
      const Mat vt = scale_of_weyl > 0.0 ? Mat(scale_of_weyl * t->weyl_eta()) : Mat(Mat::Identity(g, g));
      return std::make_pair(t, vt);
    };
  };
  const auto robin = compactness_diagnostic({4, 8, 16}, build(0.0));
  EXPECT_TRUE(robin.compactness_consistent);
  EXPECT_TRUE(robin.relative_compactness_consistent);
  const auto weyl_multiple = compactness_diagnostic({4, 8, 16}, build(0.5));
  EXPECT_FALSE(weyl_multiple.compactness_consistent);
  EXPECT_EQ(weyl_multiple.levels.size(), 3u);
}

TEST(Realization, ClassificationMatchesTheParameter) {
  const auto t = make_ordinary_triple(std::make_shared<const IntervalModel>(64, 16, -1.0), -1.0);
  const RealizationContext ctx(t);
  Rng rng(40);
  const Mat h = rng.hermitian(2);
  const Mat p = [&] {
    const Mat a = rng.complex_matrix(2, 2);
    return Mat(a * a.adjoint());
  }();
  const std::vector<Relation> thetas{graph(h), graph_on(h, Mat(rng.unit_vector(2))),
                                     graph(Mat(h + cplx(0.0, 1.0) * p)), graph(Mat(h - cplx(0.0, 1.0) * p)),
                                     multivalued<cplx>(Mat::Identity(2, 2))};
  for (const auto& theta : thetas) {
    const Realization r = ctx.realize(theta);
    EXPECT_EQ(to_string(r.realized), to_string(classify(theta)));
    EXPECT_LE(r.adjoint_residual, 1e-6);
  }
}

TEST(Realization, SelfAdjointDomainHasBoundaryCodimensionTwo) {
  const auto t = make_ordinary_triple(std::make_shared<const IntervalModel>(64, 16, -1.0), -1.0);
  const Realization r = RealizationContext(t).realize(graph<cplx>(Mat::Zero(2, 2)));
  EXPECT_EQ(r.domain_dim, t->model().interior_dim() - 2);
  EXPECT_LE(r.hermitian_residual, 1e-9);
}

}  // namespace
}  // namespace bt

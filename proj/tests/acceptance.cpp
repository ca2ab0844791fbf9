// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "bt/extensions.hpp"
#include "bt/models.hpp"
#include "bt/random.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

namespace {

using namespace bt;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

constexpr double kPi2 = 9.86960440109;

Verdict interval_dirichlet() {
  constexpr double tol = 1e-8;
  const auto triple = make_ordinary_triple(std::make_shared<IntervalModel>(), -1.0);
  const auto hits = eigenvalues_in(build_extension_from_vartheta(triple, dirichlet_parameter(2)), 0.0, 250.0);
  if (hits.size() < 5) return {false, "found " + std::to_string(hits.size()) + " eigenvalues below 250"};
  double dev = 0.0;
  for (int n = 1; n <= 5; ++n) dev = std::max(dev, std::abs(hits[n - 1].lambda - n * n * kPi2));
  return {dev <= tol, "lowest 5 vs n^2 pi^2: max deviation " + fmt(dev) + " (tol " + fmt(tol) + ")"};
}

Verdict interval_robin() {
  constexpr double tol = 1e-7;
  const auto triple = make_ordinary_triple(std::make_shared<IntervalModel>(), -1.0);
  const auto hits = eigenvalues_in(robin_extension(triple, 1.0), 0.0, 100.0);
  const auto shot = shooting_oracle({IntervalCondition::Kind::robin, 1.0}, 0.0, 100.0);
  if (hits.size() != shot.size())
    return {false, std::to_string(hits.size()) + " roots vs " + std::to_string(shot.size()) + " from shooting"};
  double dev = 0.0;
  for (std::size_t i = 0; i < hits.size(); ++i) dev = std::max(dev, std::abs(hits[i].lambda - shot[i]));
  return {dev <= tol, std::to_string(hits.size()) + " roots on (0, 100), max deviation from shooting " + fmt(dev) +
                          " (tol " + fmt(tol) + ")"};
}

Verdict krein_formula() {
  constexpr double tol = 1e-6;
  const auto model = std::make_shared<IntervalModel>(512);
  const auto triple = make_ordinary_triple(model, -1.0);
  Rng rng(2024);
  const std::vector<ExtensionHandle> hs{robin_extension(triple, 1.0), robin_extension(triple, -2.0),
                                        build_extension(triple, graph(rng.hermitian(2)), "hermitian")};
  const Mat fs = model->sample_domain(7, 5);
  const auto& rule = model->quadrature();
  auto l2 = [&rule, &model](const Vec& f) {
    const Vec s = model->samples(f);
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) acc += rule.weights[i] * std::norm(s(i));
    return std::sqrt(acc);
  };
  double worst = 0.0, worst_boundary = 0.0;
  for (const auto& h : hs)
    for (int k = 0; k < 10; ++k) {
      const cplx lambda(rng.uniform(-50.0, 150.0), rng.uniform(0.5, 5.0) * (k % 2 ? -1.0 : 1.0));
      for (Index j = 0; j < fs.cols(); ++j) {
        const KreinResult r = krein_resolvent(h, lambda, fs.col(j));
        const Vec res = model->apply_T(r.solution) - lambda * r.solution - fs.col(j);
        worst = std::max(worst, l2(res) / l2(fs.col(j)));
        worst_boundary = std::max(worst_boundary, r.boundary_residual);
      }
    }
  return {worst <= tol && worst_boundary <= tol, "3 parameters x 10 lambda x 5 f: relative L2 residual " +
                                                     fmt(worst) + ", boundary " + fmt(worst_boundary) +
                                                     " (tol " + fmt(tol) + ")"};
}

Verdict weyl_identities() {
  constexpr double tol = 1e-8;
  const std::vector<ModelPtr> models{std::make_shared<IntervalModel>(), std::make_shared<DiskModel>(16)};
  Rng rng(4);
  double worst = 0.0;
  for (const auto& m : models)
    for (int k = 0; k < 20; ++k) {
      const cplx l(rng.uniform(-50.0, 200.0), rng.uniform(0.1, 5.0) * (k % 2 ? -1.0 : 1.0));
      const cplx mu(rng.uniform(-50.0, 200.0), rng.uniform(0.1, 5.0) * (k % 3 ? 1.0 : -1.0));
      worst = std::max(worst, weyl_identity_residual(*m, l, mu));
    }
  return {worst <= tol, "20 pairs on interval and disk N=16: max residual " + fmt(worst) + " (tol " + fmt(tol) + ")"};
}

Verdict relation_calculus() {
  constexpr double tol = 1e-9;
  Rng rng(0);
  int failures = 0;
  for (int k = 0; k < 1000; ++k)
    if (!axiom_residuals(random_relation(rng, 3)).pass(tol)) ++failures;
  return {failures == 0, "1000 random relations in C^3: " + std::to_string(failures) + " failures (tol " + fmt(tol) + ")"};
}

Verdict correspondence() {
  const auto triple = make_ordinary_triple(std::make_shared<IntervalModel>(64, 16, -1.0), -1.0);
  const RealizationContext ctx(triple);
  Rng rng(6);
  int mismatches = 0;
  std::map<std::string, int> seen;
  for (int k = 0; k < 100; ++k) {
    const Mat h = rng.hermitian(2);
    const Mat a = rng.complex_matrix(2, 2);
    const Mat p = a * a.adjoint();
    Relation theta;
    switch (k % 5) {
      case 0: theta = graph(h); break;
      case 1: theta = graph_on(h, Mat(rng.unit_vector(2))); break;
      case 2: theta = graph(Mat(h + cplx(0.0, 1.0) * p)); break;
      case 3: theta = graph_on(Mat(h + cplx(0.0, 1.0) * p), Mat(rng.unit_vector(2))); break;
      default: theta = random_relation(rng, 2); break;
    }
    const RelationClass expected = classify(theta);
    const Realization r = ctx.realize(theta);
    if (!(r.realized == expected)) ++mismatches;
    ++seen[expected.self_adjoint ? "self-adjoint" : expected.symmetric ? "symmetric" : expected.dissipative ? "dissipative" : "other"];
  }
  std::string mix;
  for (const auto& [k, v] : seen) mix += (mix.empty() ? "" : ", ") + k + " " + std::to_string(v);
  return {mismatches == 0, "100 parameters (" + mix + "): " + std::to_string(mismatches) + " mismatches"};
}

Verdict disk_spectra() {
  constexpr double tol = 1e-7;
  const auto disk16 = std::make_shared<DiskModel>(16);
  const auto dirichlet = build_extension_from_vartheta(make_ordinary_triple(disk16, -1.0), dirichlet_parameter(33));
  const auto ground = eigenvalues_in(dirichlet, 0.0, 10.0);
  const double j01 = oracle::disk_dirichlet_eigenvalues(0, 10.0).at(0);
  const double dev_ground = ground.empty() ? INFINITY : std::abs(ground[0].lambda - j01);
  const double dev_ref = ground.empty() ? INFINITY : std::abs(ground[0].lambda - 5.7831859629);

  const auto disk8 = std::make_shared<DiskModel>(8);
  const auto hits = eigenvalues_in(robin_extension(make_ordinary_triple(disk8, -1.0), 1.0), 0.0, 60.0);
  auto expected = oracle::disk_robin_eigenvalues(1.0, 8, 60.0);
  std::sort(expected.begin(), expected.end(), [](auto a, auto b) { return a.lambda < b.lambda; });
  // Roots of different modes that coincide count once with summed multiplicity.
  std::vector<oracle::Eigenvalue> merged;
  for (const auto& e : expected) {
    if (!merged.empty() && std::abs(merged.back().lambda - e.lambda) < 1e-9) merged.back().multiplicity += e.multiplicity;
    else merged.push_back(e);
  }
  bool lists_match = hits.size() == merged.size();
  double dev_robin = 0.0;
  for (std::size_t i = 0; lists_match && i < hits.size(); ++i) {
    dev_robin = std::max(dev_robin, std::abs(hits[i].lambda - merged[i].lambda));
    lists_match = hits[i].multiplicity == merged[i].multiplicity;
  }
  const bool pass = dev_ground <= tol && dev_ref <= 1e-9 && lists_match && dev_robin <= tol;
  return {pass, "Dirichlet ground state vs j01^2 " + fmt(dev_ground) + "; Robin alpha=1 " +
                    std::to_string(hits.size()) + " vs " + std::to_string(merged.size()) +
                    " secular roots, max deviation " + fmt(dev_robin) + (lists_match ? "" : ", lists differ") +
                    " (tol " + fmt(tol) + ")"};
}

Verdict gelfand_scale_check() {
  const DiskModel disk(64);
  const GelfandScale s = gelfand_scale(disk);
  const auto modes = disk.mode_indices();
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double ratio = s.lambda(i, i).real() * (1.0 + std::abs(modes[i]));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const double off_diagonal = (s.lambda - Mat(s.lambda.diagonal().asDiagonal())).norm();
  const double duality = duality_residual(s, 8, 100);
  const bool pass = hi / lo <= 10.0 && duality <= 1e-12 && off_diagonal <= 1e-12;
  return {pass, "|n| <= 64: spread C/c " + fmt(hi / lo) + " (max 10), duality residual " + fmt(duality) +
                    " (tol 1e-12)"};
}

Verdict counterexample() {
  const auto steps = counterexample_truncation({4, 8, 12, 16});
  bool pass = true;
  std::string trace;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    pass = pass && s.sigma_min <= 4.0 * std::pow(2.0, -s.truncation) && s.green_residual <= 1e-9;
    if (i > 0) pass = pass && s.sigma_min < steps[i - 1].sigma_min;
    trace += (trace.empty() ? "" : ", ") + std::string("N=") + std::to_string(s.truncation) + ": " + fmt(s.sigma_min);
  }
  double green = 0.0;
  for (const auto& s : steps) green = std::max(green, s.green_residual);
  return {pass, "sigma_min " + trace + "; Green " + fmt(green) + " (tol 1e-9)"};
}

Verdict krein_von_neumann_check() {
  const auto interval = std::make_shared<IntervalModel>();
  const auto rep = classify_point(krein_von_neumann(make_ordinary_triple(interval, 0.0)), 0.0);
  const Mat k = rep.kernel_functions;
  // Weighted least squares of the kernel samples against {1, x}.
  const auto& rule = interval->quadrature();
  const Index q = static_cast<Index>(rule.size());
  Mat lines(q, 2), samples(q, k.cols());
  for (Index i = 0; i < q; ++i) {
    const double w = std::sqrt(rule.weights[i]);
    lines(i, 0) = w;
    lines(i, 1) = w * rule.nodes[i];
  }
  for (Index j = 0; j < k.cols(); ++j) samples.col(j) = interval->samples(k.col(j));
  for (Index i = 0; i < q; ++i) samples.row(i) *= std::sqrt(rule.weights[i]);
  const Mat fit = lines.colPivHouseholderQr().solve(samples);
  const double projection = k.cols() ? (samples - lines * fit).norm() / samples.norm() : INFINITY;

  const auto disk = std::make_shared<DiskModel>(16);
  const auto rep_disk = classify_point(krein_von_neumann(make_ordinary_triple(disk, -1.0)), -1.0);
  const bool pass = k.cols() == 2 && projection <= 1e-8 && rep_disk.kernel_boundary.cols() == 33;
  return {pass, "interval eta=0 kernel dim " + std::to_string(k.cols()) + ", residual off span{1,x} " +
                    fmt(projection) + " (tol 1e-8); disk eta=-1 kernel dim " +
                    std::to_string(rep_disk.kernel_boundary.cols()) + " (expected 33)"};
}

Verdict bound_test() {
  const auto triple = make_ordinary_triple(std::make_shared<DiskModel>(16), -1.0);
  bool pass = true;
  std::string detail;
  for (double a : {0.25, 0.5, 1.0}) {
    const auto r = selfadjointness_bound_test(*triple, a * triple->weyl_eta());
    const BoundVerdict want = a < 1.0 ? BoundVerdict::self_adjoint_by_iii : BoundVerdict::essentially_sa_by_wuest;
    pass = pass && std::abs(r.c2 - a) <= 0.02 && r.verdict == want;
    std::ostringstream s;
    s << (detail.empty() ? "" : "; ") << "alpha " << a << ": c2 " << r.c2 << " " << to_string(r.verdict);
    detail += s.str();
  }
  return {pass, detail + " (tol 0.02)"};
}

Verdict semiboundedness() {
  constexpr double tol = 1e-4;
  const auto triple = make_ordinary_triple(std::make_shared<DiskModel>(16), -1.0);
  bool pass = true;
  double worst = 0.0;
  std::string detail;
  for (double a : {-5.0, -2.5, 0.0, 2.5, 5.0}) {
    const double c = robin_lower_bound_constant(std::abs(a));
    const double bound = -c * std::abs(a);
    const auto hits = eigenvalues_in(robin_extension(triple, a), bound - 1.0, 7.0);
    if (hits.empty()) return {false, "no eigenvalue below 7 for alpha " + std::to_string(a)};
    double variational = INFINITY;
    for (int m = 0; m <= 2; ++m) variational = std::min(variational, rayleigh_ritz_disk_robin(a, m));
    const double ground = hits.front().lambda;
    worst = std::max(worst, std::abs(ground - variational));
    pass = pass && std::isfinite(ground) && ground >= bound - tol && std::abs(ground - variational) <= tol;
    std::ostringstream s;
    s << (detail.empty() ? "" : ", ") << a << ": " << ground;
    detail += s.str();
  }
  return {pass, "ground states " + detail + "; bound -(|a|+2)|a|; max deviation from Rayleigh-Ritz " + fmt(worst) +
                    " (tol " + fmt(tol) + ")"};
}

Verdict regularity() {
  constexpr double floor = 1.4;
  const auto disk = std::make_shared<DiskModel>(16);
  const auto triple = make_ordinary_triple(disk, -1.0);
  std::vector<std::pair<ExtensionHandle, double>> cases;
  for (double a : {-2.0, 1.0, 3.0}) cases.emplace_back(robin_extension(triple, a), -robin_lower_bound_constant(std::abs(a)) * std::abs(a) - 1.0);
  cases.emplace_back(robin_extension(triple, BoundaryFunction::step(-1.0, 2.0, 15)), -20.0);
  BoundaryFunction smooth{{0.5, 1.0, 0.5}};  // 1 + cos(theta)
  cases.emplace_back(robin_extension(triple, smooth), -20.0);
  double worst = INFINITY;
  int functions = 0;
  for (const auto& [h, lo] : cases)
    for (const auto& hit : eigenvalues_in(h, lo, 30.0))
      for (Index j = 0; j < hit.kernel_functions.cols(); ++j) {
        const auto r = regularity_estimate(*disk, Vec(hit.kernel_functions.col(j)));
        ++functions;
        if (!r.infinite) worst = std::min(worst, r.sobolev_index);
      }
  return {worst >= floor && functions > 0, std::to_string(functions) + " eigenfunctions of 5 bounded parameters: " +
                                               "smallest Sobolev index " + fmt(worst) + " (min " + fmt(floor) + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"interval Dirichlet spectrum", interval_dirichlet},
      {"interval Robin spectrum vs shooting", interval_robin},
      {"Krein formula residual", krein_formula},
      {"Weyl identities", weyl_identities},
      {"relation calculus", relation_calculus},
      {"correspondence at truncation", correspondence},
      {"disk Dirichlet and Robin spectra", disk_spectra},
      {"Gelfand scale", gelfand_scale_check},
      {"counterexample trace", counterexample},
      {"Krein-von Neumann kernel", krein_von_neumann_check},
      {"self-adjointness bound test", bound_test},
      {"Robin semiboundedness", semiboundedness},
      {"eigenfunction regularity", regularity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

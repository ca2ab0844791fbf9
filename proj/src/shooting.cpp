#include "bt/models.hpp"

#include <array>
#include <cmath>

namespace bt {

namespace {

using State = std::array<double, 2>;  // (u, u')

State rk4_step(const State& y, double h, double lambda) {
  auto rhs = [lambda](const State& s) { return State{s[1], -lambda * s[0]}; };
  const State k1 = rhs(y);
  const State k2 = rhs({y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
  const State k3 = rhs({y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
  const State k4 = rhs({y[0] + h * k3[0], y[1] + h * k3[1]});
  return {y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

// Integrates -u'' = lambda u over [0, 1] with step doubling control.
State shoot(State y, double lambda, double tol) {
  double x = 0.0, h = 0.01;
  while (x < 1.0) {
    h = std::min(h, 1.0 - x);
    const State full = rk4_step(y, h, lambda);
    const State half = rk4_step(rk4_step(y, 0.5 * h, lambda), 0.5 * h, lambda);
    const double scale = 1.0 + std::abs(half[0]) + std::abs(half[1]);
    const double err = (std::abs(full[0] - half[0]) + std::abs(full[1] - half[1])) / 15.0;
    if (err <= tol * scale || h < 1e-9) {
      x += h;
      y = {half[0] + (half[0] - full[0]) / 15.0, half[1] + (half[1] - full[1]) / 15.0};
      const double grow = err > 0 ? 0.9 * std::pow(tol * scale / err, 0.2) : 2.0;
      h *= std::clamp(grow, 0.2, 2.0);
    } else {
      h *= std::clamp(0.9 * std::pow(tol * scale / err, 0.2), 0.1, 0.5);
    }
  }
  return y;
}

}  // namespace

std::vector<double> shooting_oracle(const IntervalCondition& bc, double a, double b, int grid) {
  constexpr double kTol = 1e-13;
  std::function<double(double)> mismatch;
  switch (bc.kind) {
    case IntervalCondition::Kind::dirichlet:
      mismatch = [](double l) { return shoot({0.0, 1.0}, l, kTol)[0]; };
      break;
    case IntervalCondition::Kind::neumann:
      mismatch = [](double l) { return shoot({1.0, 0.0}, l, kTol)[1]; };
      break;
    case IntervalCondition::Kind::robin: {
      const double alpha = bc.alpha;
      mismatch = [alpha](double l) {
        const State end = shoot({1.0, alpha}, l, kTol);
        return end[1] + alpha * end[0];
      };
      break;
    }
  }
  RootOptions opt;
  opt.grid = grid;
  opt.tol = 1e-12;
  opt.divergence = std::numeric_limits<double>::infinity();
  return find_roots(mismatch, a, b, opt);
}

}  // namespace bt

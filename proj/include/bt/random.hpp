#pragma once

#include "bt/numerics.hpp"
#include "bt/relations.hpp"

#include <cstdint>
#include <random>

namespace bt {

// Seeded source of Gaussian test data; identical seeds give identical streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  cplx complex_normal() { return {normal(), normal()}; }

  Mat complex_matrix(Index rows, Index cols) {
    Mat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  Mat hermitian(Index n) {
    const Mat a = complex_matrix(n, n);
    return (a + a.adjoint()) / 2.0;
  }

  Vec unit_vector(Index n) {
    Vec v = complex_matrix(n, 1);
    return v / v.norm();
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Relation in C^g whose dimension, domain and multivalued part vary with the
// stream: spans of random pairs, graphs, graphs on subspaces and relations
// with a forced multivalued part.
inline Relation random_relation(Rng& rng, Index g) {
  switch (rng.integer(0, 3)) {
    case 0:
      return make_relation<cplx>(rng.complex_matrix(2 * g, rng.integer(0, static_cast<int>(2 * g))), g);
    case 1:
      return graph<cplx>(rng.complex_matrix(g, g));
    case 2:
      return graph_on<cplx>(rng.complex_matrix(g, g), rng.complex_matrix(g, rng.integer(0, static_cast<int>(g))));
    default: {
      const Index k = rng.integer(1, static_cast<int>(g));
      Mat v = Mat::Zero(2 * g, 2 * k);
      v.topLeftCorner(2 * g, k) = rng.complex_matrix(2 * g, k);
      v.bottomRightCorner(g, k) = rng.complex_matrix(g, k);
      return make_relation<cplx>(v, g);
    }
  }
}

}  // namespace bt

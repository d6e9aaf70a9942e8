#pragma once

#include <cstdint>
#include <random>

#include "krange/numerics.hpp"

namespace krange {

/// Every seeded routine owns one of these; same seed, same stream.
using Rng = std::mt19937_64;

/// Standard complex Gaussian entries (independent unit-variance real and
/// imaginary parts), drawn column-major.
inline Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

inline Vector gaussian_vector(Rng& rng, Index n) { return gaussian_matrix(rng, n, 1).col(0); }

inline Vector random_unit_vector(Rng& rng, Index n) {
  Vector v = gaussian_vector(rng, n);
  return v / v.norm();
}

}  // namespace krange

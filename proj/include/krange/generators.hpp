#pragma once

// Concrete tuples: truncated analytic Toeplitz operators, the bidisk shift
// triplet, and seeded random tuples with 0 <= D <= I by construction.

#include <cstdint>
#include <string>
#include <vector>

#include "krange/tuples.hpp"

namespace krange {

/// Polynomial symbol phi(z) = sum_k coeffs[k] z^k.
using Coefficients = std::vector<Complex>;

/// n x n lower-triangular Toeplitz matrix, (i, j) -> coeffs[i - j]: the
/// compression of T_phi to span{1, z, ..., z^{n-1}}.
Matrix toeplitz_analytic(const Coefficients& coeffs, Index n);

/// Coefficients of the product phi * psi.
Coefficients convolve(const Coefficients& phi, const Coefficients& psi);

/// max over m roots of unity of |a(z)|^2 + |b(z)|^2.
double symbol_sup_sq(const Coefficients& a, const Coefficients& b, int samples = 4096);

struct CoronaTriplet {
  SignedOperatorTuple tuple;
  Coefficients phi3;                 // phi1 psi1 + phi2 psi2
  double row_sup_sq = 0.0;           // sup |phi1|^2 + |phi2|^2 on the circle
  double column_sup_sq = 0.0;        // sup |psi1|^2 + |psi2|^2 on the circle
  std::vector<std::string> warnings;
};

/// (T_phi1, T_phi2, T_phi3) at size n with signature (+, +, -). The circle
/// estimates only produce warnings; throws InvalidTuple unless the matrices
/// validate as full.
CoronaTriplet corona_triplet(const Coefficients& phi1, const Coefficients& phi2, const Coefficients& psi1,
                             const Coefficients& psi2, Index n);

/// n x n down-shift, e_k -> e_{k+1}.
Matrix down_shift(Index n);

Matrix kron(const Matrix& a, const Matrix& b);

/// (S x I, I x S, S x S) on C^n x C^n, lexicographic basis e_i x e_j -> i n + j.
/// D = I - P_0 x P_0 exactly.
SignedOperatorTuple bidisk_triplet(Index n);

/// `positives` Gaussian ops G_j forming a row R of norm 1 - margin, and
/// `negatives` ops taken from R C for a block column C of norm 1 - margin.
/// D = R (I - C C*) R* lies in [0, (1 - margin)^2 I].
SignedOperatorTuple random_tuple(int positives, int negatives, Index dim, std::uint64_t seed, double margin);

}  // namespace krange

#pragma once

// Signed operator tuples (T_1, ..., T_n; s_1, ..., s_n) on a common space H,
// the defect D = sum_j s_j T_j T_j*, its square root T, and the row map
// bT: K -> H together with its Krein adjoint bT#: H -> K.

#include <cstdint>
#include <vector>

#include "krange/krein.hpp"

namespace krange {

enum class Validity { Invalid, Lower, Full };

const char* to_string(Validity v) noexcept;

struct ValidationReport {
  Validity level = Validity::Invalid;
  double min_eig_defect = 0.0;
  double max_eig_defect = 0.0;
  /// Unit eigenvectors of D violating the failed inequality (D >= 0 when
  /// invalid, D <= I when lower); empty for full tuples.
  Matrix witnesses;
};

/// Classifies 0 <= D <= I (full), 0 <= D (lower) or neither.
ValidationReport validate(const std::vector<Matrix>& ops, const Signature& signature, const Tolerances& tol = {});

class SignedOperatorTuple {
 public:
  /// Throws ShapeMismatch unless every op is d x d and ops.size() matches
  /// the signature. Invalid tuples can be constructed (so they can be
  /// reported on); operations needing D >= 0 throw InvalidTuple.
  SignedOperatorTuple(std::vector<Matrix> ops, Signature signature, Tolerances tol = {});

  Index dim() const { return dim_; }
  Index size() const { return signature_.size(); }
  const Matrix& op(Index j) const { return ops_[static_cast<std::size_t>(j)]; }
  const std::vector<Matrix>& ops() const { return ops_; }
  const Signature& signature() const { return signature_; }
  const Tolerances& tolerances() const { return tol_; }

  const Matrix& defect() const { return defect_; }
  const ValidationReport& validation() const { return validation_; }
  Validity level() const { return validation_.level; }

  /// Throws InvalidTuple if D is not PSD.
  void require_lower() const;

  /// T = D^{1/2}
  const Matrix& defect_sqrt() const;
  /// Spectral decomposition of T (eigenvalues clamped at 0, ascending).
  const SpectralDecomposition<double>& spectrum() const;
  /// Eigenvalues of T at or below this are the kernel of T.
  double rank_tol() const;
  /// Orthonormal basis of (ker T)^perp = ran T.
  Matrix range_basis() const;
  /// |T|
  double norm() const;
  /// Smallest eigenvalue of T above rank_tol, or 0 if T = 0.
  double smallest_positive_eigenvalue() const;

  /// |T_j| for each j, and their maximum.
  const std::vector<double>& op_norms() const { return op_norms_; }
  double max_op_norm() const;

  /// All ops multiplied by c.
  SignedOperatorTuple scaled(double c) const;

 private:
  std::vector<Matrix> ops_;
  Signature signature_;
  Tolerances tol_;
  Index dim_ = 0;
  Matrix defect_;
  ValidationReport validation_;
  SpectralDecomposition<double> spectrum_;
  Matrix sqrt_;
  std::vector<double> op_norms_;
};

const Matrix& defect_sqrt(const SignedOperatorTuple& tuple);

/// bT z = sum_j s_j T_j z_j
Vector bT_apply(const SignedOperatorTuple& tuple, const KreinVector& z);
/// bT# x = (T_1* x, ..., T_n* x)
KreinVector bT_sharp(const SignedOperatorTuple& tuple, const Vector& x);

/// Column-wise versions: X is d x k, the result is (n d) x k stacked.
Matrix bT_sharp_columns(const SignedOperatorTuple& tuple, const Matrix& x);
Matrix bT_apply_columns(const SignedOperatorTuple& tuple, const Matrix& z);

/// max over random unit x of | |Tx|^2 - <bT# x, bT# x>_K |.
double isometry_check(const SignedOperatorTuple& tuple, int samples, std::uint64_t seed = 0);

/// max over random pairs of |<x, bT z>_H - <bT# x, z>_K|, relative to |x||z|.
double adjoint_check(const SignedOperatorTuple& tuple, int samples, std::uint64_t seed = 0);

/// Finite-dimensional content of the statement about the Hilbert adjoint of
/// bT# on L = (ker T)^perp: bT is injective on bT# L and bT(bT# L) = ran T.
struct TTildeReport {
  Index range_dim = 0;
  bool vacuous = false;             // L = {0}
  bool injective = false;
  double injectivity_sigma_min = 0.0;   // smallest singular value of bT restricted to bT# L, coordinates of L
  bool image_is_range = false;
  double image_residual = 0.0;      // mutual projection residual of the two column spaces
  bool extension_by_construction = true;

  bool passed() const { return vacuous || (injective && image_is_range); }
};

TTildeReport ttilde_properties(const SignedOperatorTuple& tuple);

}  // namespace krange

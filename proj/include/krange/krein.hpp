#pragma once

// The Krein space K = (H + ... + H, J) of a signed tuple: block vectors,
// the indefinite inner product and uniform positivity of subspaces.

#include <vector>

#include "krange/numerics.hpp"
#include "krange/tolerances.hpp"

namespace krange {

class SignedOperatorTuple;

/// Signs (s_1, ..., s_n), each +1 or -1, n >= 1.
class Signature {
 public:
  explicit Signature(std::vector<int> signs);

  static Signature triplet() { return Signature({1, 1, -1}); }

  Index size() const { return static_cast<Index>(signs_.size()); }
  int operator[](Index j) const { return signs_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& signs() const { return signs_; }

  Index positives() const;
  Index negatives() const { return size() - positives(); }

  /// Diagonal of J on H^n with dim H = block_dim.
  RealVector metric(Index block_dim) const;

  /// (lead, -s_1, ..., -s_n)
  Signature prepend_negated(int lead) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<int> signs_;
};

/// Element (x_1, ..., x_n) of K, stored stacked.
class KreinVector {
 public:
  KreinVector(Signature signature, Vector stacked, Index block_dim);
  KreinVector(Signature signature, const std::vector<Vector>& blocks);

  static KreinVector zero(Signature signature, Index block_dim);

  const Signature& signature() const { return signature_; }
  Index block_dim() const { return block_dim_; }
  Index blocks() const { return signature_.size(); }
  const Vector& stacked() const { return stacked_; }

  auto block(Index j) const { return stacked_.segment(j * block_dim_, block_dim_); }

  KreinVector operator-(const KreinVector& other) const;

 private:
  Signature signature_;
  Vector stacked_;
  Index block_dim_;
};

/// sum_j s_j <x_j, y_j>, linear in x.
Complex krein_inner(const KreinVector& x, const KreinVector& y);

/// <Jx, x>_K = sum_j |x_j|^2
double j_norm_squared(const KreinVector& x);

/// Span of the columns of `basis`, in stacked block coordinates of K.
class Subspace {
 public:
  /// Throws ShapeMismatch if basis rows != n * block_dim, DegenerateBasis if
  /// the columns are numerically dependent.
  Subspace(Signature signature, Index block_dim, Matrix basis);

  const Signature& signature() const { return signature_; }
  Index block_dim() const { return block_dim_; }
  Index ambient_dim() const { return signature_.size() * block_dim_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  /// B* J B
  Matrix krein_gram() const;

 private:
  Signature signature_;
  Index block_dim_;
  Matrix basis_;
};

struct PositivityBound {
  double delta = 0.0;  // min <x,x>_K / <Jx,x>_K over the span
  bool uniformly_positive = false;
};

/// Smallest eigenvalue of Q* J Q for an orthonormal basis Q of the span.
PositivityBound uniform_positivity_bound(const Subspace& m, const Tolerances& tol = {});

/// Outcome of checking delta* >= eps^2 / (n max_j |T_j|^2) on M_eps.
struct LemmaReport {
  double eps = 0.0;
  bool vacuous = false;  // M_eps = {0} or every T_j = 0
  Index subspace_dim = 0;
  double delta_star = 0.0;
  double bound = 0.0;
  bool passed = false;
};

LemmaReport check_lemma_bound(const SignedOperatorTuple& tuple, double eps);

}  // namespace krange

#pragma once

// Local structure at level eps: the band E((eps, inf))H of T, the subspace
// M_eps = bT#(E((eps, inf))H) of K (a Hilbert space under <.,.>_K), and the
// pull-back norms of T on the band and of bT on M_eps.

#include <cstdint>

#include "krange/dbr.hpp"
#include "krange/tuples.hpp"

namespace krange {

struct NormPair {
  double restricted = 0.0;  // min |y| over y in the band with T y = u
  double krein = 0.0;       // min sqrt<w,w>_K over w in M_eps with bT w = u
};

/// Precomputed factorizations for one (tuple, eps); cheap to query for
/// many targets. Holds a reference to the tuple, which must outlive it.
class LocalStructure {
 public:
  /// Throws InvalidTuple, EmptySubspace when the band is {0}, DegenerateBasis
  /// when the Gram matrix of M_eps is not numerically positive definite.
  LocalStructure(const SignedOperatorTuple& tuple, double eps);

  double eps() const { return eps_; }
  /// Orthonormal eigenvectors of T with eigenvalue > eps (d x k).
  const Matrix& band_basis() const { return band_; }
  const Subspace& subspace() const { return subspace_; }
  /// G = B* J B for the basis B of M_eps; positive definite.
  const Matrix& krein_gram() const { return gram_; }

  /// Norm of bT as a map (M_eps, <.,.>_K) -> H.
  double restricted_operator_norm() const { return weighted_pinv_.largest_singular_value(); }

  /// Both pull-back norms of u; throws NotInRange unless u is in T(band).
  NormPair norms(const Vector& u) const;

 private:
  const SignedOperatorTuple* tuple_;
  double eps_;
  Matrix band_;
  Subspace subspace_;
  Matrix gram_;
  Matrix restricted_;      // T W
  Matrix weighted_;        // bT B G^{-1/2}
  PseudoInverse restricted_pinv_;
  PseudoInverse weighted_pinv_;
};

/// Basis bT# v_i of M_eps for the eigenvectors v_i of T above eps.
/// eps = 0 gives bT#((ker T)^perp).
Subspace m_eps_basis(const SignedOperatorTuple& tuple, double eps);

double restricted_operator_norm(const SignedOperatorTuple& tuple, double eps);

struct NormEqualityReport {
  double eps = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  double max_deviation = 0.0;        // max |n1 - n2|
  double max_krein_excess = 0.0;     // max (n2 - n1): contractive embedding direction
  double max_restricted_excess = 0.0;  // max (n1 - n2): reverse direction
  bool embedding_ok = false;         // n2 <= n1 within tolerance on every sample
  bool reverse_ok = false;           // n1 <= n2 within tolerance on every sample
  bool passed = false;
};

/// Draws x in the band, sets u = T x and compares the two pull-back norms.
NormEqualityReport verify_norm_equality(const SignedOperatorTuple& tuple, double eps, int samples = 20,
                                        std::uint64_t seed = 0);

}  // namespace krange

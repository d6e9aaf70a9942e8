#include "krange/localstruct.hpp"

#include <cmath>

#include "krange/random.hpp"

namespace krange {

namespace {

Matrix band_of(const SignedOperatorTuple& tuple, double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidArgument, "eps must be >= 0");
  const double cut = std::max(eps + tuple.tolerances().tie, tuple.rank_tol());
  Matrix w = eigenvectors_above(tuple.spectrum(), cut);
  if (w.cols() == 0) throw Error(ErrorKind::EmptySubspace, "E((eps, inf)) = 0 at eps = " + std::to_string(eps));
  return w;
}

Subspace subspace_of(const SignedOperatorTuple& tuple, const Matrix& band) {
  Matrix b = bT_sharp_columns(tuple, band);
  const Matrix hilbert_gram = b.adjoint() * b;
  const auto d = hermitian_eig<double>(hilbert_gram);
  if (!(d.eigenvalues(0) > 1e-12))
    throw Error(ErrorKind::DegenerateBasis, "M_eps basis Gram has eigenvalue <= 1e-12");
  return Subspace(tuple.signature(), tuple.dim(), std::move(b));
}

Matrix inverse_sqrt_pd(const Matrix& g) {
  const auto d = hermitian_eig<double>(0.5 * (g + g.adjoint()));
  if (!(d.eigenvalues(0) > 0.0))
    throw Error(ErrorKind::DegenerateBasis, "Krein Gram of M_eps is not positive definite");
  return apply_spectral_function(d, [](double x) { return 1.0 / std::sqrt(x); });
}

}  // namespace

LocalStructure::LocalStructure(const SignedOperatorTuple& tuple, double eps)
    : tuple_(&tuple),
      eps_(eps),
      band_(band_of(tuple, eps)),
      subspace_(subspace_of(tuple, band_)),
      gram_(subspace_.krein_gram()),
      restricted_(tuple.defect_sqrt() * band_),
      weighted_(bT_apply_columns(tuple, subspace_.basis()) * inverse_sqrt_pd(gram_)),
      restricted_pinv_(restricted_, tuple.tolerances()),
      weighted_pinv_(weighted_, tuple.tolerances()) {}

NormPair LocalStructure::norms(const Vector& u) const {
  const Tolerances& tol = tuple_->tolerances();
  const Preimage p1 = min_norm_preimage(restricted_pinv_, restricted_, u, tol);
  if (!p1.in_range) throw Error(ErrorKind::NotInRange, "u is not in T(E((eps, inf))H)");
  const Preimage p2 = min_norm_preimage(weighted_pinv_, weighted_, u, tol);
  if (!p2.in_range) throw Error(ErrorKind::NotInRange, "u is not in bT(M_eps)");
  // Coordinates e = G^{1/2} c with w = B c, so <w, w>_K = c* G c = |e|^2.
  return NormPair{p1.y.norm(), p2.y.norm()};
}

Subspace m_eps_basis(const SignedOperatorTuple& tuple, double eps) {
  return subspace_of(tuple, band_of(tuple, eps));
}

double restricted_operator_norm(const SignedOperatorTuple& tuple, double eps) {
  return LocalStructure(tuple, eps).restricted_operator_norm();
}

NormEqualityReport verify_norm_equality(const SignedOperatorTuple& tuple, double eps, int samples,
                                        std::uint64_t seed) {
  const LocalStructure local(tuple, eps);
  const double tol = tuple.tolerances().pullback_equality;
  NormEqualityReport r{.eps = eps, .samples = samples, .seed = seed};
  r.embedding_ok = r.reverse_ok = true;
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    const Vector x = local.band_basis() * gaussian_vector(rng, local.band_basis().cols());
    const Vector u = tuple.defect_sqrt() * x;
    const NormPair n = local.norms(u);
    const double scale = tol * std::max(1.0, n.restricted);
    r.max_deviation = std::max(r.max_deviation, std::abs(n.restricted - n.krein));
    r.max_krein_excess = std::max(r.max_krein_excess, n.krein - n.restricted);
    r.max_restricted_excess = std::max(r.max_restricted_excess, n.restricted - n.krein);
    if (n.krein - n.restricted > scale) r.embedding_ok = false;
    if (n.restricted - n.krein > scale) r.reverse_ok = false;
  }
  r.passed = r.embedding_ok && r.reverse_ok;
  return r;
}

}  // namespace krange

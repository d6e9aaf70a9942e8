#include <cmath>

#include "krange/krein.hpp"
#include "krange/localstruct.hpp"

namespace krange {

// delta* of M_eps against eps^2 / (n max_j |T_j|^2); the constant n is the
// number of summands (3 for triplets).
LemmaReport check_lemma_bound(const SignedOperatorTuple& tuple, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidArgument, "check_lemma_bound: eps must be > 0");
  tuple.require_lower();
  LemmaReport r{.eps = eps};
  const double max_norm = tuple.max_op_norm();
  if (max_norm == 0.0) {
    r.vacuous = r.passed = true;
    return r;
  }
  r.bound = eps * eps / (double(tuple.size()) * max_norm * max_norm);
  const Matrix band = eigenvectors_above(tuple.spectrum(), std::max(eps + tuple.tolerances().tie, tuple.rank_tol()));
  if (band.cols() == 0) {
    r.vacuous = r.passed = true;
    return r;
  }
  const Subspace m = m_eps_basis(tuple, eps);
  r.subspace_dim = m.dim();
  r.delta_star = uniform_positivity_bound(m, tuple.tolerances()).delta;
  r.passed = r.delta_star >= r.bound - tuple.tolerances().lemma;
  return r;
}

}  // namespace krange

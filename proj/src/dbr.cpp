#include "krange/dbr.hpp"

#include <cmath>
#include <limits>

#include "krange/random.hpp"

namespace krange {

PseudoInverse::PseudoInverse(const Matrix& a, const Tolerances& tol)
    : rows_(a.rows()), cols_(a.cols()), sv_(singular_triplets<double>(a, tol.rank_rel, tol.rank_abs)) {}

Vector PseudoInverse::apply(const Vector& u) const {
  if (u.size() != rows_) throw Error(ErrorKind::ShapeMismatch, "pseudo-inverse: target length != rows(A)");
  if (rank() == 0) return Vector::Zero(cols_);
  const Vector coeff = sv_.u.adjoint() * u;
  return sv_.v * (coeff.array() / sv_.sigma.cast<Complex>().array()).matrix();
}

Vector PseudoInverse::project_range(const Vector& u) const {
  if (u.size() != rows_) throw Error(ErrorKind::ShapeMismatch, "pseudo-inverse: target length != rows(A)");
  if (rank() == 0) return Vector::Zero(rows_);
  return sv_.u * (sv_.u.adjoint() * u);
}

Preimage min_norm_preimage(const PseudoInverse& pinv, const Matrix& a, const Vector& u, const Tolerances& tol) {
  if (u.size() != a.rows()) throw Error(ErrorKind::ShapeMismatch, "min_norm_preimage: target length != rows(A)");
  Preimage p;
  p.y = pinv.apply(u);
  p.residual = (a * p.y - u).norm();
  p.in_range = p.residual <= tol.residual * std::max(1.0, u.norm());
  return p;
}

Preimage min_norm_preimage(const Matrix& a, const Vector& u, const Tolerances& tol) {
  if (u.size() != a.rows()) throw Error(ErrorKind::ShapeMismatch, "min_norm_preimage: target length != rows(A)");
  return min_norm_preimage(PseudoInverse(a, tol), a, u, tol);
}

double dbr_norm(const Matrix& a, const Vector& u, const Tolerances& tol) {
  const Preimage p = min_norm_preimage(a, u, tol);
  if (!p.in_range)
    throw Error(ErrorKind::NotInRange, "dbr_norm: residual " + std::to_string(p.residual) + " exceeds tolerance");
  return p.y.norm();
}

ShmulyanResult shmulyan_gamma(const Matrix& a, const Vector& u, int probes, std::uint64_t seed,
                              const Tolerances& tol) {
  if (u.size() != a.rows()) throw Error(ErrorKind::ShapeMismatch, "shmulyan_gamma: target length != rows(A)");
  const PseudoInverse pinv(a, tol);
  const Matrix a_adj = a.adjoint();
  auto ratio = [&](const Vector& y) {
    const double denom = (a_adj * y).norm();
    return std::abs(u.dot(y)) / denom;
  };

  ShmulyanResult r;
  const Vector u_range = pinv.project_range(u);
  const Vector u_kernel = u - u_range;
  if (u_kernel.norm() > tol.residual * std::max(1.0, u.norm())) {
    r.verdict = RangeVerdict::NotInRange;
    r.gamma = std::numeric_limits<double>::infinity();
    UnboundednessWitness w;
    w.y = u_kernel;
    w.inner = u.dot(u_kernel);
    w.adjoint_norm = (a_adj * u_kernel).norm();
    if (pinv.rank() > 0) {
      // Mix in the dominant range direction so A* y_t != 0 along the path.
      // The step c keeps |<u, y_t>| >= (1 - t)|u_k|^2, so the ratio grows like 1/t.
      const Vector dir = pinv.singular().u.col(pinv.rank() - 1);
      const double uk2 = u_kernel.squaredNorm();
      const double c = uk2 / std::max(std::abs(u.dot(dir)), std::sqrt(uk2));
      for (int k = 1; k <= 6; ++k) {
        const double t = std::pow(10.0, -k);
        w.ratio_path.emplace_back(t, ratio(u_kernel + t * c * dir));
      }
    }
    r.witness = std::move(w);
    return r;
  }

  r.verdict = RangeVerdict::InRange;
  const Vector x = pinv.apply(u);
  r.gamma = x.norm();
  if (r.gamma > 0.0) {
    // y* = (A+)* A+ u, so A* y* = P_{(ker A)^perp} A+ u = A+ u and <y*, u> = |A+ u|^2.
    Vector y_star = Vector::Zero(a.rows());
    if (pinv.rank() > 0) {
      const auto& sv = pinv.singular();
      const Vector c = sv.v.adjoint() * x;
      y_star = sv.u * (c.array() / sv.sigma.cast<Complex>().array()).matrix();
    }
    r.maximizer_ratio = ratio(y_star);
  }

  Rng rng(seed);
  for (int k = 0; k < probes; ++k) {
    const Vector y = gaussian_vector(rng, a.rows());
    if ((a_adj * y).norm() <= std::numeric_limits<double>::min()) continue;
    r.probe_max = std::max(r.probe_max, ratio(y));
    ++r.probes_used;
  }
  return r;
}

Matrix complement_defect(const Matrix& t, const Tolerances& tol) {
  if (!is_hermitian(t)) throw Error(ErrorKind::NotHermitian, "complement_defect: T must be Hermitian");
  const auto d = hermitian_eig<double>(t);
  const double norm = d.size() > 0 ? std::max(std::abs(d.eigenvalues(0)), std::abs(d.eigenvalues(d.size() - 1))) : 0.0;
  if (norm > 1.0 + tol.contraction)
    throw Error(ErrorKind::NotContraction, "complement_defect: |T| = " + std::to_string(norm) + " > 1");
  return apply_spectral_function(d, [](double x) { return std::sqrt(std::max(1.0 - x * x, 0.0)); });
}

}  // namespace krange

#include "krange/solver.hpp"

#include <cmath>

#include "krange/dbr.hpp"

namespace krange {

namespace {

double membership_target(const SignedOperatorTuple& tuple, const Vector& u) {
  const Tolerances& tol = tuple.tolerances();
  const Preimage p = min_norm_preimage(tuple.defect_sqrt(), u, tol);
  if (!p.in_range)
    throw Error(ErrorKind::NotInRange, "u is not in ran T (residual " + std::to_string(p.residual) + ")");
  return p.y.squaredNorm();
}

SolveReport solve_with_target(const SignedOperatorTuple& tuple, const Vector& u, double eps, double target_sq) {
  const Tolerances& tol = tuple.tolerances();
  const auto& spec = tuple.spectrum();
  const double cut = tuple.rank_tol();

  // Work in the eigenbasis of T: x = T+ u, keep the band lambda > eps, divide once more.
  const Vector c = spec.eigenvectors.adjoint() * u;
  Vector x_eps_coeff = Vector::Zero(c.size());
  Vector y_coeff = Vector::Zero(c.size());
  for (Index i = 0; i < c.size(); ++i) {
    const double lambda = spec.eigenvalues(i);
    if (lambda > cut && lambda > eps + tol.tie) {
      x_eps_coeff(i) = c(i) / lambda;
      y_coeff(i) = x_eps_coeff(i) / lambda;
    }
  }
  const Vector x_eps = spec.eigenvectors * x_eps_coeff;
  const Vector y = spec.eigenvectors * y_coeff;

  SolveReport r{.eps = eps, .z = bT_sharp(tuple, y), .x_eps = x_eps};
  const Vector tz = bT_apply(tuple, r.z);
  r.residual = (u - tz).norm();
  r.krein_norm_sq = krein_inner(r.z, r.z).real();
  r.target_norm_sq = target_sq;
  r.x_eps_norm_sq = x_eps.squaredNorm();
  r.identity_deviation = (tz - tuple.defect_sqrt() * x_eps).norm();
  return r;
}

void check_target(const SignedOperatorTuple& tuple, const Vector& u) {
  if (u.size() != tuple.dim()) throw Error(ErrorKind::ShapeMismatch, "solve: target length != dim H");
  if (!u.allFinite()) throw Error(ErrorKind::NonFinite, "solve: target has non-finite entries");
  tuple.require_lower();
}

void mark_exact(SolveReport& r, const Vector& u, const Tolerances& tol) {
  r.exact = true;
  r.equality_ok = r.residual <= tol.residual * std::max(1.0, u.norm()) &&
                  std::abs(r.krein_norm_sq - r.target_norm_sq) <= tol.norm_equality;
}

}  // namespace

SolveReport solve_eps(const SignedOperatorTuple& tuple, const Vector& u, double eps) {
  check_target(tuple, u);
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidArgument, "solve_eps: eps must be > 0");
  return solve_with_target(tuple, u, eps, membership_target(tuple, u));
}

SolveReport solve_exact(const SignedOperatorTuple& tuple, const Vector& u) {
  check_target(tuple, u);
  const double lambda_min = tuple.smallest_positive_eigenvalue();
  if (lambda_min == 0.0) {
    if (u.norm() > 0.0) throw Error(ErrorKind::ZeroDefect, "solve_exact: T = 0 but u != 0");
    SolveReport r = solve_with_target(tuple, u, 1.0, 0.0);
    mark_exact(r, u, tuple.tolerances());
    return r;
  }
  SolveReport r = solve_with_target(tuple, u, lambda_min / 2.0, membership_target(tuple, u));
  mark_exact(r, u, tuple.tolerances());
  return r;
}

SignedOperatorTuple complement_tuple(const SignedOperatorTuple& tuple) {
  if (tuple.level() != Validity::Full)
    throw Error(ErrorKind::NotFullValidity, "complement requires 0 <= D <= I");
  std::vector<Matrix> ops{Matrix::Identity(tuple.dim(), tuple.dim())};
  for (const auto& t : tuple.ops()) ops.push_back(t);
  return SignedOperatorTuple(std::move(ops), tuple.signature().prepend_negated(1), tuple.tolerances());
}

SolveReport solve_complement(const SignedOperatorTuple& tuple, const Vector& v, double eps) {
  return solve_eps(complement_tuple(tuple), v, eps);
}

SolveReport solve_complement_exact(const SignedOperatorTuple& tuple, const Vector& v) {
  return solve_exact(complement_tuple(tuple), v);
}

std::vector<double> geometric_schedule(double start, double ratio, int count) {
  if (!(start > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1)
    throw Error(ErrorKind::InvalidArgument, "geometric schedule needs start > 0, 0 < ratio < 1, count >= 1");
  std::vector<double> out;
  double eps = start;
  for (int k = 0; k < count; ++k, eps *= ratio) out.push_back(eps);
  return out;
}

SweepReport convergence_sweep(const SignedOperatorTuple& tuple, const Vector& u, std::span<const double> schedule) {
  if (schedule.empty()) throw Error(ErrorKind::InvalidArgument, "sweep: empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0.0) || (k > 0 && !(schedule[k] < schedule[k - 1])))
      throw Error(ErrorKind::InvalidArgument, "sweep: schedule must be positive and strictly decreasing");
  }
  check_target(tuple, u);
  const Tolerances& tol = tuple.tolerances();
  const double target = membership_target(tuple, u);

  SweepReport s;
  s.smallest_positive_eigenvalue = tuple.smallest_positive_eigenvalue();
  for (double eps : schedule) s.reports.push_back(solve_with_target(tuple, u, eps, target));

  const double residual_tol = tol.residual * std::max(1.0, u.norm());
  for (std::size_t k = 0; k < s.reports.size(); ++k) {
    const auto& r = s.reports[k];
    if (r.krein_norm_sq < -tol.norm_equality || r.krein_norm_sq > r.target_norm_sq + tol.norm_equality)
      s.bounded_ok = false;
    if (r.eps + tol.tie < s.smallest_positive_eigenvalue && r.residual > residual_tol) s.residual_ok = false;
    if (k == 0) continue;
    const auto& prev = s.reports[k - 1];
    if (r.krein_norm_sq < prev.krein_norm_sq - tol.monotone_slack) s.monotone_ok = false;
    if (r.residual > prev.residual + tol.monotone_slack) s.monotone_ok = false;
    const KreinVector dz = r.z - prev.z;
    const double k_sq = krein_inner(dz, dz).real();
    const double dev = std::abs(k_sq - (r.x_eps - prev.x_eps).squaredNorm());
    s.cauchy_max_deviation = std::max(s.cauchy_max_deviation, dev);
    if (k_sq < -tol.norm_equality || dev > tol.norm_equality) s.cauchy_ok = false;
  }
  s.final_equality_ok = std::abs(s.reports.back().krein_norm_sq - target) <= tol.norm_equality;
  return s;
}

}  // namespace krange

#pragma once

// Minimal-Krein-norm solutions of bT z = u for u in ran T, built by
// truncating the spectrum of T at eps:
//   x = T+ u,  x_eps = E((eps, inf)) x,  y_eps = T^{-1} x_eps on that band,
//   z_eps = bT# y_eps.
// Then bT z_eps = T x_eps and <z_eps, z_eps>_K = |x_eps|^2, which increases
// to |u|^2_M(T) as eps decreases.

#include <span>
#include <vector>

#include "krange/tuples.hpp"

namespace krange {

struct SolveReport {
  double eps = 0.0;
  KreinVector z;
  Vector x_eps;
  double residual = 0.0;             // |u - bT z|
  double krein_norm_sq = 0.0;        // <z, z>_K
  double target_norm_sq = 0.0;       // |u|^2_M(T)
  double x_eps_norm_sq = 0.0;        // |x_eps|^2
  double identity_deviation = 0.0;   // |bT z - T x_eps|
  bool exact = false;                // produced by an exact solve
  bool equality_ok = false;          // exact solves: residual and norm equality within tolerance
};

/// Throws InvalidTuple (D not PSD), NotInRange, InvalidArgument (eps <= 0).
SolveReport solve_eps(const SignedOperatorTuple& tuple, const Vector& u, double eps);

/// eps = lambda_min^+ / 2, below which E((eps, inf)) = P_{(ker T)^perp}.
/// Throws ZeroDefect when T = 0 and u != 0.
SolveReport solve_exact(const SignedOperatorTuple& tuple, const Vector& u);

/// (I, T_1, ..., T_n) with signature (+, -s_1, ..., -s_n); its defect is
/// I - D = S^2 with S = complement_defect(T). Throws NotFullValidity.
SignedOperatorTuple complement_tuple(const SignedOperatorTuple& tuple);

SolveReport solve_complement(const SignedOperatorTuple& tuple, const Vector& v, double eps);
SolveReport solve_complement_exact(const SignedOperatorTuple& tuple, const Vector& v);

struct SweepReport {
  std::vector<SolveReport> reports;   // in schedule order
  double smallest_positive_eigenvalue = 0.0;
  bool monotone_ok = true;            // krein_norm_sq nondecreasing, residual nonincreasing
  bool bounded_ok = true;             // 0 <= krein_norm_sq <= target + tol
  bool residual_ok = true;            // residual small once eps < lambda_min^+
  bool final_equality_ok = false;     // last krein_norm_sq matches the target
  bool cauchy_ok = true;              // <z_a - z_b, z_a - z_b>_K = |x_a - x_b|^2
  double cauchy_max_deviation = 0.0;

  bool ok() const { return monotone_ok && final_equality_ok; }
};

/// Schedule must be nonempty, positive and strictly decreasing.
SweepReport convergence_sweep(const SignedOperatorTuple& tuple, const Vector& u, std::span<const double> schedule);

/// start, start*ratio, ..., count entries.
std::vector<double> geometric_schedule(double start, double ratio, int count);

}  // namespace krange

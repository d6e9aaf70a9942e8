#pragma once

// de Branges-Rovnyak spaces M(A): ran A with the pull-back norm
// |Ax|_M(A) = min{|y| : Ay = Ax}.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "krange/numerics.hpp"
#include "krange/tolerances.hpp"

namespace krange {

/// Factorized Moore-Penrose inverse of a (possibly rectangular) A, reusable
/// across many right-hand sides.
class PseudoInverse {
 public:
  explicit PseudoInverse(const Matrix& a, const Tolerances& tol = {});

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index rank() const { return sv_.rank(); }
  double largest_singular_value() const { return sv_.largest; }
  double cutoff() const { return sv_.cutoff; }
  const SingularTriplets<double>& singular() const { return sv_; }

  /// A+ u
  Vector apply(const Vector& u) const;
  /// A A+ u, the orthogonal projection of u onto ran A.
  Vector project_range(const Vector& u) const;

 private:
  Index rows_, cols_;
  SingularTriplets<double> sv_;
};

struct Preimage {
  Vector y;             // A+ u, orthogonal to ker A
  bool in_range = false;
  double residual = 0;  // |A y - u|
};

Preimage min_norm_preimage(const Matrix& a, const Vector& u, const Tolerances& tol = {});
Preimage min_norm_preimage(const PseudoInverse& pinv, const Matrix& a, const Vector& u, const Tolerances& tol = {});

/// |u|_M(A); throws NotInRange when u is not in ran A.
double dbr_norm(const Matrix& a, const Vector& u, const Tolerances& tol = {});

enum class RangeVerdict { InRange, NotInRange };

/// Certificate that sup |<y,u>| / |A* y| is unbounded: y has A* y ~ 0 but
/// <y,u> != 0, and ratios along y + t c r (r the top range direction, c a
/// fixed scale) blow up like 1/t as t -> 0.
struct UnboundednessWitness {
  Vector y;
  Complex inner = 0.0;        // <y, u>
  double adjoint_norm = 0.0;  // |A* y|
  std::vector<std::pair<double, double>> ratio_path;  // (t, ratio)
};

struct ShmulyanResult {
  RangeVerdict verdict = RangeVerdict::NotInRange;
  double gamma = 0.0;            // +inf when not in range
  double maximizer_ratio = 0.0;  // ratio at y = (A+)* A+ u, which attains gamma
  double probe_max = 0.0;        // largest ratio seen over random probes
  int probes_used = 0;
  std::optional<UnboundednessWitness> witness;
};

/// gamma = sup_{A* y != 0} |<y,u>| / |A* y|, computed as |A+ u| with random
/// probes as an independent lower bound.
ShmulyanResult shmulyan_gamma(const Matrix& a, const Vector& u, int probes, std::uint64_t seed,
                              const Tolerances& tol = {});

/// S = (I - T^2)^{1/2} for a Hermitian contraction T, the operator whose
/// range space is the complement H(T).
Matrix complement_defect(const Matrix& t, const Tolerances& tol = {});

}  // namespace krange

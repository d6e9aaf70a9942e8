#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace krange {

/// Numerical thresholds shared by the whole library. Defaults are the
/// contract values; the CLI lets users override them by name.
struct Tolerances {
  double psd = 1e-9;                 // negative eigenvalues above -psd are clamped to 0
  double rank_rel = 1e-10;           // kernel cutoff relative to the largest eigenvalue
  double rank_abs = 1e-14;           // absolute floor for the kernel cutoff
  double residual = 1e-8;            // range membership / solve residual, times max(1, |u|)
  double norm_equality = 1e-8;       // |<z,z>_K - |u|^2_M|
  double isometry = 1e-9;            // |Tx|^2 vs <T#x, T#x>_K
  double monotone_slack = 1e-10;     // allowed decrease of a monotone sequence
  double lemma = 1e-9;               // slack on the uniform positivity bound
  double pullback_equality = 1e-7;   // |n1 - n2|, times max(1, n1)
  double positivity = 1e-12;         // delta* at or below this is not uniformly positive
  double contraction = 1e-8;         // |T| <= 1 + contraction
  double tie = 1e-12;                // eigenvalues within tie of eps count as <= eps

  double rank_cutoff(double largest) const { return std::max(rank_rel * largest, rank_abs); }

  /// Names accepted by `set`, in a fixed order.
  static const std::vector<std::string>& names();
  double get(std::string_view name) const;
  void set(std::string_view name, double value);

  /// Applies "name=value[,name=value...]". Throws krange::Error(InvalidArgument)
  /// on unknown names or unparsable values.
  void apply_overrides(std::string_view spec);

  std::vector<std::pair<std::string, double>> entries() const;
};

}  // namespace krange

#pragma once

#include <algorithm>

namespace dancer {

/// Dimensions and exponent of -Δu = |u|^{p-1}u - u on R^{m+n}, x ∈ R^m, y ∈ R^n.
struct ProblemParams {
  int m = 1;
  int n = 4;
  double p = 3.0;

  double p_bar() const noexcept { return std::min(p, 2.0); }

  /// Throws InvalidArgument unless m >= 1, n >= 3 and p > 1.
  void validate() const;

  /// p < (m+2)/(m-2) when m >= 3; always true for m = 1, 2.
  bool subcritical() const noexcept;
};

}  // namespace dancer

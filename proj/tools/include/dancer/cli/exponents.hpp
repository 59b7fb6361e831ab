#pragma once

#include <string>

#include "dancer/params.hpp"

namespace dancer::cli {

/// Admissibility of (n, p) for each existence statement.
struct ExponentReport {
  /// n >= 6 and p >= (n+2)/(n-2).
  bool main0 = false;
  /// n >= 5 and p >= (n+3)/(n-1).
  bool corollary = false;
  /// n >= 4 and p > (n+1)/(n-1).
  bool main1 = false;
  /// n = 3 and p an integer > 1.
  bool main1_prime = false;

  bool any() const noexcept { return main0 || corollary || main1 || main1_prime; }
  /// Tag of the first admissible statement in the order main1, main1_prime,
  /// main0, corollary; "none" if no window admits the pair.
  std::string theorem() const;
};

/// Exact window arithmetic; the thresholds are compared after clearing
/// denominators, so equality cases are decided without rounding.
ExponentReport validate_exponents(const ProblemParams& params);

/// Whether the radial construction pipeline covers the pair (main1 or main1_prime).
bool construct_admissible(const ExponentReport& report) noexcept;

}  // namespace dancer::cli

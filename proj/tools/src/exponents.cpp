#include "dancer/cli/exponents.hpp"

#include <cmath>

namespace dancer::cli {

std::string ExponentReport::theorem() const {
  if (main1) return "main1";
  if (main1_prime) return "main1_prime";
  if (main0) return "main0";
  if (corollary) return "corollary";
  return "none";
}

ExponentReport validate_exponents(const ProblemParams& params) {
  const int n = params.n;
  const double p = params.p;
  ExponentReport r;
  r.main0 = n >= 6 && p * (n - 2) >= n + 2;
  r.corollary = n >= 5 && p * (n - 1) >= n + 3;
  r.main1 = n >= 4 && p * (n - 1) > n + 1;
  r.main1_prime = n == 3 && p > 1.0 && std::floor(p) == p;
  return r;
}

bool construct_admissible(const ExponentReport& report) noexcept { return report.main1 || report.main1_prime; }

}  // namespace dancer::cli

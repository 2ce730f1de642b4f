#include "allocsim/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "allocsim/math.hpp"

namespace allocsim {

namespace {

TestOutcome finish(double diff, double se2, double alpha) {
  double z;
  if (se2 == 0.0) {
    z = diff == 0.0 ? 0.0
                    : std::copysign(std::numeric_limits<double>::infinity(), diff);
  } else {
    z = diff / std::sqrt(se2);
  }
  return {z, std::fabs(z) >= z_crit(alpha), alpha, diff};
}

}  // namespace

double z_crit(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("z_crit: alpha must be in (0,1)");
  }
  return norm_quantile(1.0 - alpha / 2.0);
}

TestOutcome wald_binary(long long n0, long long s0, long long n1, long long s1,
                        double alpha) {
  if (n0 < 1 || n1 < 1) throw std::invalid_argument("wald_binary: arms must be non-empty");
  if (s0 < 0 || s0 > n0 || s1 < 0 || s1 > n1) {
    throw std::invalid_argument("wald_binary: successes must satisfy 0 <= s <= n");
  }
  const double p0 = static_cast<double>(s0) / static_cast<double>(n0);
  const double p1 = static_cast<double>(s1) / static_cast<double>(n1);
  const double se2 = p0 * (1.0 - p0) / static_cast<double>(n0) +
                     p1 * (1.0 - p1) / static_cast<double>(n1);
  return finish(p1 - p0, se2, alpha);
}

TestOutcome wald_continuous(long long n0, double mean0, double ssd0, long long n1,
                            double mean1, double ssd1, double alpha) {
  if (n0 < 2 || n1 < 2) {
    throw std::invalid_argument("wald_continuous: arms need at least 2 outcomes");
  }
  if (ssd0 < 0.0 || ssd1 < 0.0) {
    throw std::invalid_argument("wald_continuous: squared deviations cannot be negative");
  }
  const double se2 = ssd0 / static_cast<double>(n0 - 1) / static_cast<double>(n0) +
                     ssd1 / static_cast<double>(n1 - 1) / static_cast<double>(n1);
  return finish(mean1 - mean0, se2, alpha);
}

}

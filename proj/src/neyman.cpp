#include "allocsim/neyman.hpp"

#include <cmath>
#include <stdexcept>

namespace allocsim {

AllocationTarget neyman_rho_sd(double sigma0, double sigma1) {
  if (!(sigma0 > 0.0) || !(sigma1 > 0.0)) {
    throw std::invalid_argument("neyman_rho_sd: standard deviations must be > 0");
  }
  return {sigma1 / (sigma0 + sigma1)};
}

AllocationTarget neyman_rho_binary(double p0, double p1) {
  if (!(p0 > 0.0 && p0 < 1.0) || !(p1 > 0.0 && p1 < 1.0)) {
    throw std::invalid_argument("neyman_rho_binary: success rates must be in (0,1)");
  }
  return neyman_rho_sd(std::sqrt(p0 * (1.0 - p0)), std::sqrt(p1 * (1.0 - p1)));
}

std::vector<NeymanPoint> neyman_curve(double p0, const std::vector<double>& p1_grid) {
  std::vector<NeymanPoint> out;
  out.reserve(p1_grid.size());
  for (double p1 : p1_grid) {
    out.push_back({p1, neyman_rho_binary(p0, p1).rho1, 0.5});
  }
  return out;
}

std::vector<double> default_p_grid() {
  std::vector<double> grid;
  grid.reserve(99);
  for (int k = 1; k <= 99; ++k) grid.push_back(k / 100.0);
  return grid;
}

}

#pragma once

#include <vector>

namespace allocsim {

// Variance-minimising treatment share for the two-sample mean difference:
// allocate proportionally to the per-arm outcome standard deviations.
struct AllocationTarget {
  double rho1;  // target n1/n, in (0,1)
};

// rho1 = sigma1 / (sigma0 + sigma1). Both SDs must be strictly positive.
AllocationTarget neyman_rho_sd(double sigma0, double sigma1);

// Binary specialization via sd(p) = sqrt(p(1-p)). Requires p0, p1 in (0,1);
// the endpoints give a zero SD and an undefined ratio.
AllocationTarget neyman_rho_binary(double p0, double p1);

struct NeymanPoint {
  double p1;
  double rho_n1;  // optimal treatment share at this p1
  double rho_er;  // equal-randomisation reference, constant 0.5
};

// One row per grid value, in input order. Grid values must lie in (0,1).
std::vector<NeymanPoint> neyman_curve(double p0, const std::vector<double>& p1_grid);

// 0.01 through 0.99 in steps of 0.01, computed as k/100 so grid points are
// exact and reflection pairs (p, 1-p) match bit for bit.
std::vector<double> default_p_grid();

}

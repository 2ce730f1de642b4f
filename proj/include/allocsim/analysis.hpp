#pragma once

namespace allocsim {

struct TestOutcome {
  double z;             // Wald statistic, may be +-infinity
  bool reject;          // |z| >= z_crit(alpha)
  double alpha;         // two-sided significance level
  double estimate_diff; // treatment minus control point estimate
};

// Upper alpha/2 standard normal quantile. alpha in (0,1).
double z_crit(double alpha);

// Two-sample Wald test on proportions with raw MLEs and unpooled variance.
// Degenerate variance (both arms constant): z is 0 when the estimates agree,
// +-infinity when they differ. With p0 = 0.05 and 30 patients an all-failure
// arm appears in about a fifth of trials, so this branch is routine, not
// exotic. n0, n1 >= 1 and 0 <= si <= ni.
TestOutcome wald_binary(long long n0, long long s0, long long n1, long long s1,
                        double alpha);

// Two-sample Wald test on means, normal reference (no t correction), sample
// variances ssd_i/(n_i - 1). ssd is the sum of squared deviations from the
// arm mean. n0, n1 >= 2.
TestOutcome wald_continuous(long long n0, double mean0, double ssd0, long long n1,
                            double mean1, double ssd1, double alpha);

}

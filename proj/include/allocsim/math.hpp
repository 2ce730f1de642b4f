#pragma once

namespace allocsim {

// Inverse standard normal CDF. Absolute error below 1e-9 everywhere on (0,1);
// throws std::invalid_argument outside the open interval (NaN included).
double norm_quantile(double p);

// Standard normal CDF.
double norm_cdf(double x);

}

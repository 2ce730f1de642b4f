#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "allocsim/neyman.hpp"
#include "allocsim/rng.hpp"

using allocsim::neyman_curve;
using allocsim::neyman_rho_binary;
using allocsim::neyman_rho_sd;

TEST_CASE("allocation share from standard deviations") {
  CHECK(neyman_rho_sd(0.5, 2.0).rho1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(neyman_rho_sd(1.0, 1.0).rho1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(neyman_rho_sd(2.0, 0.5).rho1 == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(neyman_rho_sd(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(neyman_rho_sd(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(neyman_rho_sd(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("allocation share from binary rates") {
  CHECK(neyman_rho_binary(0.05, 0.3).rho1 ==
        doctest::Approx(0.6776927890634407).epsilon(1e-12));
  CHECK(neyman_rho_binary(0.1, 0.2).rho1 ==
        doctest::Approx(0.5714285714285714).epsilon(1e-12));
  CHECK(neyman_rho_binary(0.01, 0.5).rho1 ==
        doctest::Approx(0.8340301047258184).epsilon(1e-12));
  // sd(0.3) == sd(0.7), so the split is even.
  CHECK(neyman_rho_binary(0.3, 0.7).rho1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(neyman_rho_binary(0.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(neyman_rho_binary(0.05, 1.0), std::invalid_argument);
}

TEST_CASE("binary share is invariant under reflecting both rates") {
  for (int i = 1; i <= 99; ++i) {
    for (int j = 1; j <= 99; ++j) {
      const double p0 = i / 100.0;
      const double p1 = j / 100.0;
      CHECK(neyman_rho_binary(p0, p1).rho1 ==
            doctest::Approx(neyman_rho_binary(1.0 - p0, 1.0 - p1).rho1).epsilon(1e-12));
    }
  }
}

TEST_CASE("swapping the arms complements the share") {
  const double sds[] = {0.1, 0.5, 1.0, 2.0, 7.5};
  for (double a : sds) {
    for (double b : sds) {
      CHECK(neyman_rho_sd(a, b).rho1 + neyman_rho_sd(b, a).rho1 ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

// The share should maximise the Wald noncentrality |d| / sqrt(v0/n0 + v1/n1)
// over integer splits of a fixed total. Brute force the argmax and compare.
TEST_CASE("share maximises noncentrality over integer splits") {
  const int n = 200;
  allocsim::Xoshiro256pp rng(99);
  int tested = 0;
  while (tested < 20) {
    const double p0 = 0.02 + 0.96 * rng.uniform01();
    const double p1 = 0.02 + 0.96 * rng.uniform01();
    if (std::fabs(p1 - p0) < 0.05) continue;
    ++tested;
    const double v0 = p0 * (1.0 - p0);
    const double v1 = p1 * (1.0 - p1);
    int best_n1 = 1;
    double best = -1.0;
    for (int n1 = 2; n1 <= n - 2; ++n1) {
      const int n0 = n - n1;
      const double nc = std::fabs(p1 - p0) / std::sqrt(v0 / n0 + v1 / n1);
      if (nc > best) {
        best = nc;
        best_n1 = n1;
      }
    }
    const double rho = neyman_rho_binary(p0, p1).rho1;
    CAPTURE(p0);
    CAPTURE(p1);
    CHECK(std::fabs(best_n1 / double(n) - rho) <= 1.0 / n);
  }
}

TEST_CASE("curve rows mirror the grid") {
  CHECK(neyman_curve(0.3, {}).empty());

  const std::vector<double> grid{0.1, 0.25, 0.9};
  const auto rows = neyman_curve(0.05, grid);
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].p1 == grid[i]);
    CHECK(rows[i].rho_er == 0.5);
    CHECK(rows[i].rho_n1 ==
          doctest::Approx(neyman_rho_binary(0.05, grid[i]).rho1).epsilon(1e-15));
  }
}

TEST_CASE("default grid is the exact percent lattice") {
  const auto grid = allocsim::default_p_grid();
  REQUIRE(grid.size() == 99);
  for (int k = 1; k <= 99; ++k) {
    CHECK(grid[k - 1] == k / 100.0);
  }
}

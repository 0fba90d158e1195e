#include <doctest.h>

#include <cmath>
#include <random>

#include "calabi/error.hpp"
#include "calabi/mu_solver.hpp"
#include "calabi/numeric.hpp"

using namespace calabi;

TEST_CASE("sqrt(2) instance") {
  // m = 1, kappa = 4, a = 1: the sum reduces to 2 - mu^2.
  const MuRootCertificate c = solve_mu(1, 4.0, 1.0);
  CHECK(std::abs(c.root - std::sqrt(2.0)) <= 1e-12);
  CHECK(c.sign_changes == 1);
  CHECK(c.lower_bracket == 1.0);
  CHECK(c.excess == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  CHECK(c.residual <= 1e-12 * c.residual_scale);
}

TEST_CASE("f at the lower bracket is kappa a/(m+1)") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const double kappa = 0.1 + 19.9 * U(rng);
    const double a = kappa / 2.0 * (0.01 + 0.98 * U(rng));
    const double lower = 2.0 * (m + 1) / kappa;
    // The sum cancels down to its last term here; compare on the scale of the terms.
    const auto c = mu_polynomial(m, kappa, a);
    double scale = 0.0, pw = 1.0;
    for (double cj : c) {
      scale += std::abs(cj) * pw;
      pw *= lower;
    }
    scale *= factorial(m + 1) / (ipow(a, m) * ipow(lower, m + 2));
    CHECK(std::abs(f_eval(m, kappa, a, lower) - kappa * a / (m + 1)) <= 1e-14 * scale);
  }
}

TEST_CASE("coefficient signs change exactly once") {
  const auto s = coefficient_signs(3, 6.0, 1.0);
  CHECK(s.size() == 5);
  CHECK(s.front() == 1);
  CHECK(s.back() == -1);
  CHECK(count_sign_changes(s) == 1);
  CHECK(count_sign_changes({1, 0, 0, -1, 0, 1}) == 2);
  // 2a = kappa j/(m+1) makes c_j vanish exactly (m = 1, kappa = 4, a = 1, j = 1).
  CHECK(mu_polynomial(1, 4.0, 1.0)[1] == 0.0);
}

TEST_CASE("uniqueness on a scan") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const double kappa = 0.1 + 19.9 * U(rng);
    const double a = kappa / 2.0 * (0.001 + 0.998 * U(rng));
    const MuRootCertificate c = solve_mu(m, kappa, a);
    CHECK(c.excess > 0.0);
    CHECK(scan_root_count(m, kappa, a, c.lower_bracket, std::ldexp(1.0, 20), 1000) == 1);
    CHECK(std::abs(f_eval(m, kappa, a, c.root)) <= 1e-9 * std::max(1.0, c.residual_scale));
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(solve_mu(1, 4.0, 2.0), InvalidParameter);  // a = kappa/2
  CHECK_THROWS_AS(solve_mu(1, 4.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(solve_mu(1, -1.0, 0.1), InvalidParameter);
  CHECK_THROWS_AS(solve_mu(0, 4.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(f_eval(1, 4.0, 1.0, 0.0), InvalidParameter);
}

TEST_CASE("sign sequences and large-mu sign") {
  CHECK(coefficient_signs(1, 4.0, 1.0) == std::vector<int>{1, 0, -1});
  CHECK(coefficient_signs(2, 6.0, 1.0) == std::vector<int>{1, 0, -1, -1});
  // f ~ (2a - kappa)/mu for large mu: negative on 0 < a < kappa/2.
  CHECK(f_eval(3, 5.0, 1.0, 1e6) < 0.0);
  CHECK(f_eval(3, 5.0, 1.0, 1e6) * 1e6 == doctest::Approx(2.0 - 5.0).epsilon(1e-4));
}

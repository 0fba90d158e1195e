#include <doctest.h>

#include <cmath>
#include <random>

#include "calabi/error.hpp"
#include "calabi/scalar_soliton.hpp"

using namespace calabi;

TEST_CASE("constants for the worked example") {
  // m = 1, kappa = -2, c = -4, mu = -1: c1 = -2 + (-4)/2 + 4 ... = 0, c2 = e (-2 + 4 (1 - 1)) = -2e.
  const ScalarConstants k = constants_c1_c2(1, -2.0, -4.0, -1.0);
  CHECK(k.c1 == doctest::Approx(0.0));
  CHECK(k.c2 == doctest::Approx(-2.0 * std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("boundary conditions and equation") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const double c = -(0.1 + 10.0 * U(rng));
    const double kappa = c / (m + 1) + 6.0 * U(rng);
    const double mu = -(0.3 + 4.7 * U(rng));
    const ScalarSolitonProfile pr(m, kappa, c, mu);
    CHECK(std::abs(pr.phi(1.0)) <= 1e-10);
    CHECK(std::abs(pr.phi_prime(1.0)) <= 1e-10);
    for (double s : {1.01, 1.5, 3.0, 30.0, 999.0}) {
      CHECK(std::abs(scalar_ode_residual(pr, s)) <= 1e-8);
      CHECK(std::abs(scalar_first_integral_residual(pr, s)) <= 1e-9);
      CHECK(pr.phi(s) > 0.0);
    }
    CHECK(positivity_certificate(pr, 1e4));
  }
}

TEST_CASE("stable evaluation agrees with the literal closed form where it is well conditioned") {
  const ScalarSolitonProfile pr(2, -1.0, -6.0, -3.0);
  for (double s : {1.5, 2.0, 5.0, 20.0}) CHECK(pr.phi(s) == doctest::Approx(pr.closed_form(s)).epsilon(1e-11));
}

TEST_CASE("oracle integration") {
  const ScalarSolitonProfile pr(3, -2.0, -8.0, -0.7);
  std::vector<double> grid;
  for (int i = 1; i <= 30; ++i) grid.push_back(1.0 + 0.01 * std::pow(1e4, i / 30.0));
  const auto o = oracle_integrate_scalar(3, -2.0, -8.0, -0.7, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(o[i] == doctest::Approx(pr.phi(grid[i])).epsilon(1e-9));
}

TEST_CASE("Ricci specialization") {
  const RicciSpecialization r = ricci_specialize(3, -2.0);
  CHECK(r.c == -8.0);
  CHECK(r.lambda == 1);
  CHECK(r.expanding_compatible);
  const RicciSpecialization s = ricci_specialize(3, 2.0);
  CHECK(s.lambda == -1);
  CHECK_FALSE(s.expanding_compatible);
  CHECK_THROWS_AS(ricci_specialize(3, 1.0), InvalidParameter);

  const ScalarSolitonProfile sp(3, -2.0, r.c, -1.1);
  const SolitonProfile kr = SolitonProfile::anchored(3, -2.0, r.lambda, -1.1, 1.0);
  for (double s : {1.001, 1.3, 4.0, 60.0}) CHECK(sp.phi(s) == doctest::Approx(kr.phi_tau(s - 1.0)).epsilon(1e-10));
}

TEST_CASE("scalar curvature relation") {
  // S - c + Delta(mu sigma) = 0 along the profile.
  const ScalarSolitonProfile pr(2, 1.0, -3.0, -1.4);
  auto q = [&](double) { return Jet{0.0, -1.4, 0.0}; };
  for (double s : {1.2, 2.0, 9.0}) {
    const double S = scalar_curvature(pr, 2, 1.0, s);
    CHECK(S - (-3.0) + laplacian_radial(pr, q, s) == doctest::Approx(0.0).epsilon(1e-7));
  }
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(ScalarSolitonProfile(1, -2.0, -4.0, 0.0), DegenerateSoliton);
  CHECK_THROWS_AS(ScalarSolitonProfile(0, -2.0, -4.0, -1.0), InvalidParameter);
  const ScalarSolitonProfile pr(1, -2.0, -4.0, -1.0);
  CHECK_THROWS_AS(pr.phi(0.5), InvalidParameter);
}

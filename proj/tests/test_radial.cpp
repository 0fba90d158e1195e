#include <doctest.h>

#include <cmath>

#include "calabi/error.hpp"
#include "calabi/mu_solver.hpp"
#include "calabi/radial.hpp"

using namespace calabi;

TEST_CASE("linear profile integrates to an exponential") {
  // phi = 2 sigma: sigma = sigma0 e^{2s}, P(s) = sigma0 (e^{2s} - 1)/2, l = sqrt(2 sigma0) (e^s - 1).
  const SolitonProfile lin = SolitonProfile::cone(1, 4.0, 1, -1.0);
  const RadialSolution sol = solve_radial(lin, 1.5, -4.0, 4.0, 801);
  REQUIRE(sol.samples().size() == 801);
  CHECK_FALSE(sol.clipped_low());
  CHECK_FALSE(sol.clipped_high());
  for (const auto& r : sol.samples()) {
    const double e2 = std::exp(2.0 * r.s);
    CHECK(r.sigma == doctest::Approx(1.5 * e2).epsilon(1e-10));
    CHECK(r.potential == doctest::Approx(0.75 * std::expm1(2.0 * r.s)).epsilon(1e-9));
    CHECK(r.length == doctest::Approx(std::sqrt(3.0) * std::expm1(r.s)).epsilon(1e-9));
  }
  CHECK(sol.sigma_at(0.123) == doctest::Approx(1.5 * std::exp(0.246)).epsilon(1e-11));
  CHECK(sol.potential_at(-1.7) == doctest::Approx(0.75 * std::expm1(-3.4)).epsilon(1e-9));
}

TEST_CASE("window precondition") {
  const SolitonProfile lin = SolitonProfile::cone(1, 4.0, 1, -1.0);
  CHECK_THROWS_AS(solve_radial(lin, 1.0, 0.5, 2.0, 11), InvalidParameter);
  CHECK_THROWS_AS(solve_radial(lin, -1.0, -1.0, 1.0, 11), InvalidParameter);
}

TEST_CASE("anchored profile clips at a") {
  const SolitonProfile sh = SolitonProfile::shrinking(1, 4.0, 1.0, solve_mu(1, 4.0, 1.0));
  const RadialSolution sol = solve_radial(sh, 2.0, -12.0, 2.0, 1401);
  // phi ~ 2 (sigma - a) near a: sigma - a decays like e^{2s} and is not reached at finite s.
  CHECK(sol.samples().front().s == -12.0);
  CHECK(sol.samples().front().sigma > 1.0);
  CHECK(sol.samples().front().sigma - 1.0 < 1e-9);
}

TEST_CASE("vanishing order and growth") {
  const SolitonProfile sh = SolitonProfile::shrinking(1, 4.0, 1.0, solve_mu(1, 4.0, 1.0));
  CHECK(vanishing_order_left(sh) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(growth_exponent_analytic(sh) == 1.0);
  CHECK(growth_exponent_numeric(sh) == doctest::Approx(1.0).epsilon(1e-2));
  const SolitonProfile steady = SolitonProfile::cone(2, 3.0, 0, -1.0);
  CHECK(growth_exponent_analytic(steady) == 0.0);
}

TEST_CASE("geodesic length") {
  const SolitonProfile lin = SolitonProfile::cone(1, 4.0, 1, -1.0);
  // int_1^4 d sigma / sqrt(2 sigma) = sqrt(2)
  CHECK(geodesic_length(lin, 1.0, 4.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(std::isinf(geodesic_length(lin, 1.0, kInfinity)));
  // Cone apex: int_0^1 d sigma/sqrt(2 sigma) = sqrt(2), finite.
  CHECK(geodesic_length(lin, 0.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("asymptotic coefficient") {
  const SolitonProfile lin = SolitonProfile::cone(1, 4.0, 1, -1.0);
  const RadialSolution sol = solve_radial(lin, 1.0, -2.0, 14.0, 3201);
  const AsymptoticEstimate est = asymptotic_coefficient(sol, -1.0);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(est.error_estimate <= 1e-6);
  const RadialSolution short_sol = solve_radial(lin, 1.0, -2.0, 1.0, 101);
  CHECK_THROWS_AS(asymptotic_coefficient(short_sol, -1.0), NonConvergence);
}

TEST_CASE("oracle integration agrees with the closed form") {
  const SolitonProfile pr = SolitonProfile::anchored(3, 2.0, 1, -0.8, 0.5);
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.501 * std::pow(2000.0, i / 50.0));
  const auto o = oracle_integrate_linear(3, 2.0, 1, -0.8, 0.501, pr.phi(0.501), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(o[i] == doctest::Approx(pr.phi(grid[i])).epsilon(1e-9));
}

TEST_CASE("csv layout") {
  const SolitonProfile lin = SolitonProfile::cone(1, 4.0, 1, -1.0);
  const std::string csv = radial_csv(solve_radial(lin, 1.0, -1.0, 1.0, 5));
  CHECK(csv.rfind("s,sigma,phi,F,potential,length,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(csv.find("\n0,1,2,0,0,0,") != std::string::npos);
}

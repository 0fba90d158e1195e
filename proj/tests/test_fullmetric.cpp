#include <doctest.h>

#include <cmath>

#include "calabi/error.hpp"
#include "calabi/fullmetric.hpp"
#include "calabi/mu_solver.hpp"

using namespace calabi;

TEST_CASE("flat potential has unit determinant") {
  // P = u = e^{2s}: det = P_s P_ss/(8u^2) = 2u * 4u/(8u^2) = 1.
  const auto model = RadialMetricModel::from_function([](double s) { return std::exp(2.0 * s); }, -2.0, 2.0, 401, 1, -1.0);
  CHECK(model.size() == 401);
  CHECK(model.u_min() == doctest::Approx(std::exp(-4.0)));
  CHECK(metric_determinant(model, std::exp(2.0 * (-2.0 + 200 * model.step()))) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(metric_determinant(model, 1.2345), InvalidParameter);
  CHECK_THROWS_AS(metric_determinant(model, model.u_min()), InvalidParameter);
  const NodeValues nv = node_values(model, 4);
  CHECK(nv.u.size() == nv.psi.size());
  CHECK(nv.u.size() == 101 - 6);
}

TEST_CASE("identity holds for the flat expanding soliton") {
  const auto model = RadialMetricModel::from_function([](double s) { return 0.5 * std::expm1(2.0 * s); }, -3.0, 3.0, 401, 1, -1.0);
  const IdentityResidual r = soliton_identity_residual(model);
  CHECK(r.max_residual <= 1e-9);
  CHECK(r.raw_residual.size() == 4);
}

TEST_CASE("identity holds for the shrinking bundle soliton with second-order convergence") {
  const MuRootCertificate c = solve_mu(1, 4.0, 1.0);
  const SolitonProfile sh = SolitonProfile::shrinking(1, 4.0, 1.0, c);
  const auto model = RadialMetricModel::from_solution(solve_radial(sh, 2.0, -3.0, 3.0, 401), -1, c.root);
  const IdentityResidual r = soliton_identity_residual(model);
  CHECK(r.max_residual <= 1e-6);
  CHECK(r.order_estimate == doctest::Approx(2.0).epsilon(0.05));
  for (std::size_t i = 1; i < r.raw_residual.size(); ++i) CHECK(r.raw_residual[i] < r.raw_residual[i - 1]);
  CHECK(soliton_identity_residual(model.with_mu(c.root + 0.1)).max_residual > 1e-2);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(RadialMetricModel({1.0, 2.0}, 0.0, 0.1, 1, -1.0), InvalidParameter);
  // P linear in s: P_ss = 0, degenerate metric.
  const auto flat_line = RadialMetricModel::from_function([](double s) { return s; }, -1.0, 1.0, 401, 1, -1.0);
  CHECK_THROWS_AS(soliton_identity_residual(flat_line), InvalidParameter);
}

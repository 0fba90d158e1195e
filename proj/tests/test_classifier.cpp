#include <doctest.h>

#include <cmath>

#include "calabi/classifier.hpp"
#include "calabi/error.hpp"
#include "calabi/mu_solver.hpp"
#include "calabi/radial.hpp"

using namespace calabi;

TEST_CASE("zeros satisfy the slope law") {
  const SolitonProfile pr = SolitonProfile::anchored(2, 3.0, -1, -1.2, 0.8);
  const auto zeros = zero_structure(pr, 1e6);
  REQUIRE_FALSE(zeros.empty());
  for (const auto& z : zeros) {
    CHECK(z.slope == doctest::Approx(zero_slope(3.0, -1, z.sigma)));
    CHECK(std::abs(pr.phi_prime(z.sigma) - z.slope) <= 1e-6);
    CHECK(std::abs(z.fd_slope - z.slope) <= 1e-6);
  }
  CHECK(zero_bounds_hold(pr, zeros));
}

TEST_CASE("expanding cones have no positive zero") {
  for (double kappa : {2.0, 4.0, 6.0}) {
    for (double mu : {-0.5, -1.0, -2.0}) CHECK(zero_structure(SolitonProfile::cone(1, kappa, 1, mu), 1e6).empty());
  }
}

TEST_CASE("double zero") {
  // kappa + 2 lambda a = 0 gives phi(a) = phi'(a) = 0; phi''(a) = 2 lambda, so lambda = 1
  // touches zero from above (m = 1, kappa = -4, a = 2).
  const SolitonProfile dz = SolitonProfile::anchored(1, -4.0, 1, -1.0, 2.0);
  CHECK(std::abs(dz.phi_prime(2.0)) <= 1e-12);
  CHECK(dz.phi_second(2.0) == doctest::Approx(2.0));
  const auto ends = completeness_report(dz);
  CHECK(ends.first.kind == EndKind::complete_end);
  CHECK(ends.first.vanishing_order >= 1.99);
  CHECK(std::isinf(ends.first.distance));
  CHECK(std::isinf(geodesic_length(dz, 0.0, 1.0)));
}

TEST_CASE("smooth extension onto the zero section") {
  const SolitonProfile sh = SolitonProfile::shrinking(1, 4.0, 1.0, solve_mu(1, 4.0, 1.0));
  const EndpointVerdict v = extension_check(sh);
  CHECK(v.kind == EndKind::smooth_zero_section);
  CHECK(v.slope == doctest::Approx(2.0).epsilon(1e-8));
  const auto ends = completeness_report(sh);
  CHECK(ends.second.kind == EndKind::unbounded_complete);

  const SolitonProfile ex = SolitonProfile::anchored(1, 1.0, 1, -1.0, 0.5);
  CHECK(extension_check(ex).kind == EndKind::smooth_zero_section);
  // Wrong slope: anchored at a with kappa + 2 lambda a != 2.
  CHECK(extension_check(SolitonProfile::anchored(1, 3.0, 1, -1.0, 0.5)).kind != EndKind::smooth_zero_section);
  // a = 0 is never a zero section.
  CHECK(extension_check(SolitonProfile::cone(1, 4.0, 1, -1.0)).kind != EndKind::smooth_zero_section);
}

TEST_CASE("interior zero is rejected") {
  const SolitonProfile pr = SolitonProfile::anchored(1, -2.0, 1, -1.0, 0.5).with_right_endpoint(50.0);
  const auto zeros = zero_structure(pr, 50.0);
  if (!zeros.empty() && zeros.front().sigma > pr.a() * (1 + 1e-9)) {
    CHECK_THROWS_AS(completeness_report(pr), InvalidParameter);
  }
}

TEST_CASE("bundle admissibility") {
  const auto s = bundle_admissibility(2, 1, -1);
  CHECK(s.admissible);
  CHECK(s.a_required == 1.0);
  const auto e = bundle_admissibility(1, 2, 1);
  CHECK(e.admissible);
  CHECK(e.a_required == 0.5);
  CHECK_FALSE(bundle_admissibility(2, 2, -1).admissible);
  CHECK_FALSE(bundle_admissibility(2, 2, 1).admissible);
  CHECK_THROWS_AS(bundle_admissibility(2, 1, 0), InvalidParameter);
  for (int p = 1; p <= 6; ++p) {
    for (int k = 1; k <= 6; ++k) {
      const int n = bundle_admissibility(p, k, -1).admissible + bundle_admissibility(p, k, 1).admissible;
      CHECK(n == (p == k ? 0 : 1));
    }
  }
}

TEST_CASE("names round trip") {
  for (EndKind k : {EndKind::complete_end, EndKind::smooth_zero_section, EndKind::finite_distance_singular,
                    EndKind::unbounded_complete}) {
    CHECK(end_kind_from_name(end_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(end_kind_from_name("nope"), InvalidParameter);
  CHECK(endpoint_name(Endpoint::left_a) != endpoint_name(Endpoint::right_b));
}

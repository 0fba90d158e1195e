#include <doctest.h>

#include <cmath>

#include "calabi/error.hpp"
#include "calabi/sasaki.hpp"

using namespace calabi;

TEST_CASE("eta-Einstein structure keeps alpha + beta = 2m") {
  const EtaEinstein e = make_eta_einstein(3, 1.5);
  CHECK(e.alpha() + e.beta() == 6.0);
  CHECK(e.kappa() == 3.5);
  CHECK_FALSE(e.sasaki_einstein());
  CHECK(eta_einstein_from_kappa(3, 8.0).sasaki_einstein());
}

TEST_CASE("D-homothety rescales kappa") {
  // alpha' = (alpha + 2 - 2f)/f  =>  kappa' = kappa/f
  const EtaEinstein e = make_eta_einstein(2, 4.0);
  const EtaEinstein g = d_homothety(e, 2.0);
  CHECK(g.alpha() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.kappa() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(d_homothety(g, 0.5).approx_equal(e));
  CHECK_THROWS_AS(d_homothety(e, 0.0), InvalidParameter);
  CHECK_THROWS_AS(d_homothety(e, -1.0), InvalidParameter);
}

TEST_CASE("normalize_to_kappa") {
  const EtaEinstein e = make_eta_einstein(1, 2.0);  // kappa = 4
  const auto [f, n] = normalize_to_kappa(e, 1.0);
  CHECK(f == doctest::Approx(4.0));
  CHECK(n.kappa() == doctest::Approx(1.0));
  CHECK_THROWS_AS(normalize_to_kappa(e, -1.0), InvalidParameter);
  CHECK(normalize_to_kappa(eta_einstein_from_kappa(1, 0.0), 0.0).first == 1.0);
}

TEST_CASE("line bundle and aperture cone") {
  CHECK(LineBundle(2, 1).kappa() == 4.0);
  CHECK(bundle_kappa(LineBundle(3, 2)) == 3.0);
  CHECK_THROWS_AS(LineBundle(0, 1), InvalidParameter);
  const ConeAperture c(2.0, 0.5);
  // C r^{2q}/(2q) at r = 4, q = 1/2: 2 * 4 / 1
  CHECK(aperture_potential(c, 4.0) == doctest::Approx(8.0));
  CHECK_THROWS_AS(ConeAperture(1.0, 0.0), InvalidParameter);
}

#include "calabi/sasaki.hpp"

#include <cmath>
#include <string>

#include "calabi/error.hpp"

namespace calabi {

EtaEinstein::EtaEinstein(int m, double alpha) : m_(m), alpha_(alpha) {
  require(m >= 1, "eta-Einstein structure needs m >= 1, got " + std::to_string(m));
  require(std::isfinite(alpha), "alpha must be finite");
}

bool EtaEinstein::sasaki_einstein(double tol) const { return std::abs(beta()) <= tol; }

bool EtaEinstein::approx_equal(const EtaEinstein& other, double tol) const {
  return m_ == other.m_ && std::abs(alpha_ - other.alpha_) <= tol;
}

EtaEinstein make_eta_einstein(int m, double alpha) { return EtaEinstein(m, alpha); }

EtaEinstein eta_einstein_from_kappa(int m, double kappa) { return EtaEinstein(m, kappa - 2.0); }

EtaEinstein d_homothety(const EtaEinstein& e, double factor) {
  require(factor > 0.0 && std::isfinite(factor), "D-homothety factor must be positive");
  return EtaEinstein(e.m(), (e.alpha() + 2.0 - 2.0 * factor) / factor);
}

std::pair<double, EtaEinstein> normalize_to_kappa(const EtaEinstein& e, double target_kappa) {
  const double kappa = e.kappa();
  if (kappa == 0.0 && target_kappa == 0.0) return {1.0, e};
  if (kappa == 0.0 || target_kappa == 0.0 || (kappa > 0.0) != (target_kappa > 0.0)) {
    throw InvalidParameter("D-homothety cannot change the sign of kappa (" + std::to_string(kappa) +
                           " -> " + std::to_string(target_kappa) + ")");
  }
  const double factor = kappa / target_kappa;
  // Build from the target directly so kappa matches exactly.
  return {factor, eta_einstein_from_kappa(e.m(), target_kappa)};
}

LineBundle::LineBundle(int p_, int k_) : p(p_), k(k_) {
  require(p >= 1 && k >= 1, "line bundle data needs p >= 1 and k >= 1");
}

double bundle_kappa(const LineBundle& b) { return b.kappa(); }

ConeAperture::ConeAperture(double amplitude, double exponent)
    : amplitude_(amplitude), exponent_(exponent) {
  require(amplitude > 0.0 && std::isfinite(amplitude), "aperture amplitude must be positive");
  require(exponent > 0.0 && std::isfinite(exponent), "aperture exponent must be positive");
}

double aperture_potential(const ConeAperture& c, double r) {
  require(r > 0.0, "aperture potential needs r > 0");
  const double q = c.exponent();
  return c.amplitude() * std::pow(r, 2.0 * q) / (2.0 * q);
}

}  // namespace calabi

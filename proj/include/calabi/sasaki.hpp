#pragma once

#include <utility>

namespace calabi {

/// Parameters of an eta-Einstein Sasaki manifold, Ric_g = alpha g + beta eta(x)eta.
///
/// Only (m, alpha) are stored; beta = 2m - alpha and the transverse Einstein
/// constant kappa = alpha + 2 are derived, so alpha + beta = 2m holds exactly.
class EtaEinstein {
 public:
  EtaEinstein(int m, double alpha);

  int m() const { return m_; }
  double alpha() const { return alpha_; }
  double beta() const { return 2.0 * m_ - alpha_; }
  double kappa() const { return alpha_ + 2.0; }

  /// beta == 0, i.e. kappa == 2m + 2 (the cone is Ricci-flat).
  bool sasaki_einstein(double tol = 1e-12) const;

  bool approx_equal(const EtaEinstein& other, double tol = 1e-12) const;

 private:
  int m_;
  double alpha_;
};

EtaEinstein make_eta_einstein(int m, double alpha);

/// Structure with transverse Einstein constant kappa (alpha = kappa - 2).
EtaEinstein eta_einstein_from_kappa(int m, double kappa);

/// D-homothetic transformation r -> r^factor: alpha' = (alpha + 2 - 2 factor)/factor,
/// hence kappa' = kappa / factor.
EtaEinstein d_homothety(const EtaEinstein& e, double factor);

/// Factor of the D-homothety taking e.kappa() to target_kappa, and the result.
/// Only same-sign transformations exist; kappa = target = 0 returns factor 1.
std::pair<double, EtaEinstein> normalize_to_kappa(const EtaEinstein& e, double target_kappa);

/// Positive line bundle data with K_M = L^{-p}, working on L^{-k}.
struct LineBundle {
  int p;
  int k;

  LineBundle(int p_, int k_);
  /// kappa = 2p/k.
  double kappa() const { return 2.0 * p / k; }
};

double bundle_kappa(const LineBundle& b);

/// Ricci-flat Kahler cone with aperture, potential C r^{2q}/(2q).
class ConeAperture {
 public:
  ConeAperture(double amplitude, double exponent);
  double amplitude() const { return amplitude_; }
  double exponent() const { return exponent_; }

 private:
  double amplitude_;
  double exponent_;
};

double aperture_potential(const ConeAperture& c, double r);

}  // namespace calabi

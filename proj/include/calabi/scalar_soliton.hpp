#pragma once

// Gradient scalar solitons S - c + Delta Q = 0 in the Calabi ansatz on (1, inf).
// With y = sigma^m phi the equation integrates once to
//
//   y' - mu y = kappa sigma^m - c sigma^{m+1}/(m+1) + c1,
//
// and completeness at sigma = 1 (phi(1) = phi'(1) = 0) fixes c1 = -kappa + c/(m+1)
// and the coefficient c2 of the homogeneous solution e^{mu sigma} sigma^{-m}.

#include <array>
#include <span>
#include <vector>

#include "calabi/error.hpp"
#include "calabi/profile.hpp"

namespace calabi {

struct ScalarConstants {
  double c1;
  double c2;
};

/// c1 = -kappa + c/(m+1);
/// c2 = e^{-mu} (kappa sum_{j=1}^m m!/(m-j)! mu^{-(j+1)} - c sum_{j=0}^m m!/(m-j)! mu^{-(j+2)}).
ScalarConstants constants_c1_c2(int m, double kappa, double c, double mu);

class ScalarSolitonProfile {
 public:
  ScalarSolitonProfile(int m, double kappa, double c, double mu);

  int m() const { return m_; }
  double kappa() const { return kappa_; }
  double c() const { return c_; }
  double mu() const { return mu_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double a() const { return 1.0; }
  double b() const { return kInfinity; }

  /// phi(sigma), sigma >= 1.
  double phi(double sigma) const;
  double phi_prime(double sigma) const;
  double phi_second(double sigma) const;

  /// Right-hand side of the first integral, kappa sigma^m - c sigma^{m+1}/(m+1) + c1.
  double first_integral_rhs(double sigma) const;

  /// The displayed closed form, evaluated literally (exact but cancellation-prone
  /// when |mu| (sigma - 1) is moderate).
  double closed_form(double sigma) const;

 private:
  double convolution_y(double tau) const;
  // y = sigma^m phi and its first two derivatives.
  std::array<double, 3> y_jet(double sigma) const;

  int m_;
  double kappa_, c_, mu_;
  double c1_, c2_;
  double c2_scaled_;  // c2 e^{mu}
  std::vector<double> r_;
};

double phi_scalar(const ScalarSolitonProfile& pr, double sigma);

struct Jet {
  double value;
  double d1;
  double d2;
};

/// Delta u = (m/sigma) u' phi + (u' phi)'.
template <class Profile, class U>
double laplacian_radial(const Profile& pr, U&& u, double sigma) {
  require(sigma > pr.a() && sigma < pr.b(), "laplacian_radial: sigma outside (a, b)");
  const Jet j = u(sigma);
  const double phi = pr.phi(sigma);
  return pr.m() / sigma * j.d1 * phi + j.d2 * phi + j.d1 * pr.phi_prime(sigma);
}

/// S = kappa m/sigma - (sigma^m phi)''/sigma^m.
template <class Profile>
double scalar_curvature(const Profile& pr, int m, double kappa, double sigma) {
  require(sigma > 0.0, "scalar_curvature needs sigma > 0");
  const double phi = pr.phi(sigma);
  const double d1 = pr.phi_prime(sigma);
  const double d2 = pr.phi_second(sigma);
  return kappa * m / sigma - (m * (m - 1.0) * phi / (sigma * sigma) + 2.0 * m * d1 / sigma + d2);
}

/// [(sigma^m phi)'' - mu (sigma^m phi)' - m kappa sigma^{m-1} + c sigma^m] / sigma^m with
/// derivatives by eighth-order central differences of phi_scalar.
double scalar_ode_residual(const ScalarSolitonProfile& pr, double sigma);

/// [(sigma^m phi)' - mu sigma^m phi - (kappa sigma^m - c sigma^{m+1}/(m+1) + c1)] / sigma^m,
/// derivative by finite differences.
double scalar_first_integral_residual(const ScalarSolitonProfile& pr, double sigma);

/// True iff phi > 0 on (1, sigma_max] at the sample points and the first integral
/// satisfies (sigma^m phi)' - mu sigma^m phi >= -(c/(m+1))(sigma - 1) there.
/// Requires kappa - c/(m+1) >= 0, c < 0, mu < 0.
bool positivity_certificate(const ScalarSolitonProfile& pr, double sigma_max);

struct RicciSpecialization {
  double c;
  int lambda;
  bool expanding_compatible;  // kappa < 0
};

/// kappa in {-2, 2}: c = (m+1) kappa, lambda = -kappa/2.
RicciSpecialization ricci_specialize(int m, double kappa);

/// Direct integration of the first integral from y(1) = 0; returns phi at each
/// sigma_out (>= 1, increasing). Relative tolerance 1e-13.
std::vector<double> oracle_integrate_scalar(int m, double kappa, double c, double mu,
                                            std::span<const double> sigma_out);

}  // namespace calabi

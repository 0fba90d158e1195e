#pragma once

// Gradient Kahler-Ricci soliton profiles phi(sigma) for the Calabi ansatz over a
// transversely Kahler-Einstein Sasaki manifold. phi solves the linear ODE
//
//   phi' + (m/sigma - mu) phi = kappa + 2 lambda sigma
//
// with general solution
//
//   phi = nu e^{mu sigma}/sigma^m - 2 lambda sigma/mu
//         - (K/mu^{m+2}) sum_{j=0}^m (m+1)!/j! mu^j sigma^{j-m},
//
// K = 2 lambda + kappa mu/(m+1). Sign convention for lambda: +1 expanding,
// 0 steady, -1 shrinking; the soliton equation is rho + 2 lambda omega = -i ddbar Q
// with grad Q = mu r d/dr.

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "calabi/kernels.hpp"
#include "calabi/mu_solver.hpp"
#include "calabi/numeric.hpp"

namespace calabi {

/// nu_a^lambda(mu): the integration constant making phi(a) = 0.
double nu_boundary(int m, double kappa, int lambda, double mu, double a);

/// nu_0^lambda(mu) = (m+1)! (2 lambda + kappa mu/(m+1)) / mu^{m+2}.
double nu_zero(int m, double kappa, int lambda, double mu);

/// Value of the entire-series form of the cone profile (a = 0, nu = nu0) and a
/// certified bound on the discarded tail.
struct SeriesValue {
  double value;
  double tail_bound;
  int terms;
};

/// kappa sigma/(m+1) + nu0 sum_{j=2}^{truncation} mu^{j+m} sigma^j/(j+m)!.
SeriesValue phi_cone_series(int m, double kappa, int lambda, double mu, double sigma, int truncation);
/// Same, with the truncation grown until the tail bound is below 1e-15 (1 + |value|).
SeriesValue phi_cone_series(int m, double kappa, int lambda, double mu, double sigma);

/// kappa + 2 lambda sigma0: slope of phi at any zero sigma0.
double zero_slope(double kappa, int lambda, double sigma0);

/// Terms kept in endpoint Taylor expansions, used for sigma - a < 0.1 a.
inline constexpr std::size_t kTaylorTerms = 20;

class SolitonProfile {
 public:
  struct Params {
    int m = 1;
    double kappa = 0.0;
    int lambda = 1;
    double mu = -1.0;
    double nu = 0.0;
    double a = 0.0;
    double b = kInfinity;
  };

  /// Profile with an explicit nu.
  explicit SolitonProfile(const Params& p);

  /// Expanding cone profile: a = 0, nu = nu0.
  static SolitonProfile cone(int m, double kappa, int lambda, double mu);
  /// Profile with phi(a) = 0, nu = nu_boundary(a). For a = 0 this is cone().
  static SolitonProfile anchored(int m, double kappa, int lambda, double mu, double a,
                                 double b = kInfinity);
  /// Shrinking profile closing at a (lambda = -1, nu = 0) with mu from the
  /// certificate; K is taken from cert.excess so phi(a) vanishes to roundoff.
  static SolitonProfile shrinking(int m, double kappa, double a, const MuRootCertificate& cert);

  int m() const { return p_.m; }
  double kappa() const { return p_.kappa; }
  int lambda() const { return p_.lambda; }
  double mu() const { return p_.mu; }
  double nu() const { return p_.nu; }
  double nu0() const { return coeffs_.nu0; }
  double a() const { return p_.a; }
  double b() const { return p_.b; }
  const Params& params() const { return p_; }
  const kernels::ProfileCoefficients& coefficients() const { return coeffs_; }

  SolitonProfile with_right_endpoint(double b) const;
  SolitonProfile with_nu(double nu) const;

  /// phi(sigma) for sigma > 0.
  double phi(double sigma) const;
  /// phi'(sigma) from the ODE identity.
  double phi_prime(double sigma) const;
  /// phi''(sigma) from the differentiated ODE identity.
  double phi_second(double sigma) const;

  /// phi(a + tau). Near a left endpoint where phi vanishes the value comes from
  /// the Taylor expansion at a (phi(a) = 0 exactly), which keeps full relative
  /// accuracy as tau -> 0.
  double phi_tau(double tau) const;

  /// True if a > 0 and |phi(a)| <= 1e-10 (1 + |kappa|).
  bool anchored_at_left() const { return anchored_; }

  /// Taylor coefficients phi^{(n)}(s0)/n!, n = 0..N-1, generated from phi(s0)
  /// through the ODE recursion.
  template <std::size_t N>
  std::array<double, N> taylor(double s0, double phi0) const;

  /// Batched phi over sigma (SIMD-dispatched).
  void phi_batch(std::span<const double> sigma, std::span<double> out) const;
  std::vector<double> phi_batch(std::span<const double> sigma) const;

 private:
  SolitonProfile(const Params& p, double nu_offset, double bracket = std::numeric_limits<double>::quiet_NaN());
  void finish();

  Params p_;
  kernels::ProfileCoefficients coeffs_;
  bool anchored_ = false;
  std::array<double, kTaylorTerms> left_taylor_{};
  double taylor_radius_ = 0.0;
};

/// phi_closed(profile, sigma) with the sigma > 0 precondition checked.
double phi_closed(const SolitonProfile& pr, double sigma);
double phi_prime(const SolitonProfile& pr, double sigma);

/// R(sigma) = phi'_fd(sigma) + (m/sigma - mu) phi(sigma) - (kappa + 2 lambda sigma), with
/// phi'_fd an eighth-order central difference of phi_closed.
double ode_residual(const SolitonProfile& pr, double sigma);

/// Eighth-order central difference of f at x with step h.
template <class F>
double central_difference8(F&& f, double x, double h) {
  static constexpr double w[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  double d = 0.0;
  for (int k = 1; k <= 4; ++k) d += w[k - 1] * (f(x + k * h) - f(x - k * h));
  return d / h;
}

/// Eighth-order central second difference.
template <class F>
double central_second_difference8(F&& f, double x, double h) {
  static constexpr double w0 = -205.0 / 72.0;
  static constexpr double w[] = {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  double d = w0 * f(x);
  for (int k = 1; k <= 4; ++k) d += w[k - 1] * (f(x + k * h) + f(x - k * h));
  return d / (h * h);
}

template <std::size_t N>
std::array<double, N> SolitonProfile::taylor(double s0, double phi0) const {
  // y' = g y + q with g = mu - m/sigma, q = kappa + 2 lambda sigma, all expanded
  // in powers of (sigma - s0): (n+1) y_{n+1} = sum_k g_k y_{n-k} + q_n.
  std::array<double, N> y{};
  std::array<double, N> g{};
  const double m = p_.m;
  g[0] = p_.mu - m / s0;
  double inv_pow = 1.0 / s0;
  for (std::size_t k = 1; k < N; ++k) {
    inv_pow /= s0;
    g[k] = -m * ((k % 2 == 0) ? 1.0 : -1.0) * inv_pow;
  }
  y[0] = phi0;
  for (std::size_t n = 0; n + 1 < N; ++n) {
    double acc = (n == 0) ? p_.kappa + 2.0 * p_.lambda * s0 : (n == 1 ? 2.0 * p_.lambda : 0.0);
    for (std::size_t k = 0; k <= n; ++k) acc += g[k] * y[n - k];
    y[n + 1] = acc / static_cast<double>(n + 1);
  }
  return y;
}

}  // namespace calabi

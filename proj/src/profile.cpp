#include "calabi/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calabi/error.hpp"

namespace calabi {
namespace {

void check_common(int m, int lambda, double mu) {
  require(m >= 1 && m <= kMaxDimension,
          "profile dimension m must lie in [1, " + std::to_string(kMaxDimension) + "]");
  require(lambda >= -1 && lambda <= 1, "lambda must be -1, 0 or +1");
  if (mu == 0.0) {
    throw DegenerateSoliton("mu = 0: grad Q vanishes and the soliton field is trivial");
  }
  require(std::isfinite(mu), "mu must be finite");
}

double bracket(int m, double kappa, int lambda, double mu) {
  return 2.0 * lambda + kappa * mu / (m + 1);
}

// sum_{i>=0} x^i/(i+m+1)!, |x| < 1.
double shifted_exp_series(int m, double x) {
  double term = 1.0 / factorial(m + 1);
  double sum = term;
  for (int i = 1; i < 40; ++i) {
    term *= x / (i + m + 1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// nu_boundary(a) - nu0 without cancellation for |mu a| < 1.
double nu_boundary_offset(int m, double kappa, int lambda, double mu, double a) {
  const double x = mu * a;
  if (std::abs(x) >= 1.0 || a == 0.0) {
    return nu_boundary(m, kappa, lambda, mu, a) - nu_zero(m, kappa, lambda, mu);
  }
  const double am1 = ipow(a, m + 1);
  const double k = bracket(m, kappa, lambda, mu);
  return std::exp(-x) * (2.0 * lambda * am1 / mu - factorial(m + 1) * k * am1 * shifted_exp_series(m, x) / mu);
}

}  // namespace

double nu_zero(int m, double kappa, int lambda, double mu) {
  check_common(m, lambda, mu);
  return factorial(m + 1) * bracket(m, kappa, lambda, mu) / ipow(mu, m + 2);
}

double nu_boundary(int m, double kappa, int lambda, double mu, double a) {
  check_common(m, lambda, mu);
  require(a >= 0.0, "nu_boundary needs a >= 0");
  const double k = bracket(m, kappa, lambda, mu);
  // a^m distributed into the sum so a = 0 is regular.
  double sum = 0.0;
  double mu_a_pow = 1.0;  // (mu a)^j
  for (int j = 0; j <= m; ++j) {
    sum += factorial(m + 1) / factorial(j) * mu_a_pow;
    mu_a_pow *= mu * a;
  }
  return std::exp(-mu * a) * (2.0 * lambda / mu * ipow(a, m + 1) + k / ipow(mu, m + 2) * sum);
}

SeriesValue phi_cone_series(int m, double kappa, int lambda, double mu, double sigma, int truncation) {
  check_common(m, lambda, mu);
  require(sigma >= 0.0, "phi_cone_series needs sigma >= 0");
  require(truncation >= 2, "series truncation must be >= 2");
  const double k = bracket(m, kappa, lambda, mu);
  // nu0 mu^{j+m} sigma^j/(j+m)! = K (m+1)! mu^{j-2} sigma^j/(j+m)!
  double term = k / (m + 2) * sigma * sigma;
  double sum = term;
  for (int j = 3; j <= truncation; ++j) {
    term *= mu * sigma / (j + m);
    sum += term;
  }
  const double value = kappa / (m + 1) * sigma + sum;
  // |nu0| sigma^{-m} |mu sigma|^{J+m+1}/(J+m+1)! e^{|mu sigma|}
  double tail = 0.0;
  if (sigma > 0.0 && k != 0.0) {
    const double x = std::abs(mu * sigma);
    const int n = truncation + m + 1;
    const double log_tail = std::log(std::abs(k)) + std::lgamma(m + 2.0) - (m + 2.0) * std::log(std::abs(mu)) -
                            m * std::log(sigma) + n * std::log(x) - std::lgamma(n + 1.0) + x;
    tail = std::exp(log_tail);
  }
  return {value, tail, truncation};
}

SeriesValue phi_cone_series(int m, double kappa, int lambda, double mu, double sigma) {
  int truncation = 8;
  for (;;) {
    SeriesValue v = phi_cone_series(m, kappa, lambda, mu, sigma, truncation);
    if (v.tail_bound < 1e-15 * (1.0 + std::abs(v.value))) return v;
    if (truncation > 4000) throw NonConvergence("phi_cone_series: tail bound not reached");
    truncation *= 2;
  }
}

double zero_slope(double kappa, int lambda, double sigma0) { return kappa + 2.0 * lambda * sigma0; }

SolitonProfile::SolitonProfile(const Params& p)
    : SolitonProfile(p, kInfinity) {}

SolitonProfile::SolitonProfile(const Params& p, double nu_offset, double bracket) : p_(p) {
  check_common(p.m, p.lambda, p.mu);
  require(std::isfinite(p.kappa), "kappa must be finite");
  require(std::isfinite(p.nu), "nu must be finite");
  require(p.a >= 0.0 && std::isfinite(p.a), "left endpoint a must be finite and >= 0");
  require(p.b > p.a, "right endpoint b must exceed a");
  if (!std::isfinite(nu_offset)) nu_offset = p.nu - nu_zero(p.m, p.kappa, p.lambda, p.mu);
  coeffs_ = kernels::make_coefficients(p.m, p.kappa, p.lambda, p.mu, p.nu, nu_offset, bracket);
  finish();
}

void SolitonProfile::finish() {
  anchored_ = false;
  if (p_.a > 0.0) {
    const double at_a = kernels::scalar::phi_one(coeffs_, p_.a);
    if (std::abs(at_a) <= 1e-10 * (1.0 + std::abs(p_.kappa))) {
      anchored_ = true;
      left_taylor_ = taylor<kTaylorTerms>(p_.a, 0.0);
      taylor_radius_ = 0.1 * p_.a;
    }
  }
}

SolitonProfile SolitonProfile::cone(int m, double kappa, int lambda, double mu) {
  Params p{m, kappa, lambda, mu, nu_zero(m, kappa, lambda, mu), 0.0, kInfinity};
  return SolitonProfile(p, 0.0);
}

SolitonProfile SolitonProfile::anchored(int m, double kappa, int lambda, double mu, double a, double b) {
  if (a == 0.0) return cone(m, kappa, lambda, mu).with_right_endpoint(b);
  Params p{m, kappa, lambda, mu, nu_boundary(m, kappa, lambda, mu, a), a, b};
  return SolitonProfile(p, nu_boundary_offset(m, kappa, lambda, mu, a));
}

SolitonProfile SolitonProfile::shrinking(int m, double kappa, double a, const MuRootCertificate& cert) {
  require(cert.excess > 0.0, "shrinking profile needs a certified root above 2(m+1)/kappa");
  const double k = kappa * cert.excess / (m + 1);
  Params p{m, kappa, -1, cert.root, 0.0, a, kInfinity};
  return SolitonProfile(p, -factorial(m + 1) * k / ipow(cert.root, m + 2), k);
}

SolitonProfile SolitonProfile::with_right_endpoint(double b) const {
  SolitonProfile copy = *this;
  require(b > p_.a, "right endpoint b must exceed a");
  copy.p_.b = b;
  return copy;
}

SolitonProfile SolitonProfile::with_nu(double nu) const {
  Params p = p_;
  p.nu = nu;
  return SolitonProfile(p);
}

double SolitonProfile::phi(double sigma) const {
  require(sigma > 0.0, "phi needs sigma > 0");
  return kernels::scalar::phi_one(coeffs_, sigma);
}

double SolitonProfile::phi_prime(double sigma) const {
  require(sigma > 0.0, "phi_prime needs sigma > 0");
  return (p_.mu - p_.m / sigma) * phi(sigma) + p_.kappa + 2.0 * p_.lambda * sigma;
}

double SolitonProfile::phi_second(double sigma) const {
  const double y = phi(sigma);
  const double dy = (p_.mu - p_.m / sigma) * y + p_.kappa + 2.0 * p_.lambda * sigma;
  return (p_.mu - p_.m / sigma) * dy + p_.m / (sigma * sigma) * y + 2.0 * p_.lambda;
}

double SolitonProfile::phi_tau(double tau) const {
  if (anchored_ && tau >= 0.0 && tau < taylor_radius_) {
    double v = 0.0;
    for (std::size_t n = left_taylor_.size(); n-- > 1;) v = (v + left_taylor_[n]) * tau;
    return v;
  }
  return phi(p_.a + tau);
}

void SolitonProfile::phi_batch(std::span<const double> sigma, std::span<double> out) const {
  kernels::phi_batch(coeffs_, sigma, out);
}

std::vector<double> SolitonProfile::phi_batch(std::span<const double> sigma) const {
  std::vector<double> out(sigma.size());
  phi_batch(sigma, out);
  return out;
}

double phi_closed(const SolitonProfile& pr, double sigma) { return pr.phi(sigma); }

double phi_prime(const SolitonProfile& pr, double sigma) { return pr.phi_prime(sigma); }

double ode_residual(const SolitonProfile& pr, double sigma) {
  require(sigma > 0.0, "ode_residual needs sigma > 0");
  const auto& c = pr.coefficients();
  auto f = [&c](double s) { return kernels::scalar::phi_one(c, s); };
  const double h = std::min(sigma / 64.0, 0.05 / std::abs(pr.mu()));
  const double dphi = central_difference8(f, sigma, h);
  return dphi + (pr.m() / sigma - pr.mu()) * f(sigma) - (pr.kappa() + 2.0 * pr.lambda() * sigma);
}

}  // namespace calabi

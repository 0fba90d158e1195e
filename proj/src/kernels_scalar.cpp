#include <cmath>

#include "calabi/error.hpp"
#include "calabi/kernels.hpp"
#include "calabi/numeric.hpp"

namespace calabi::kernels {

ProfileCoefficients make_coefficients(int m, double kappa, double lambda, double mu, double nu,
                                      double nu_offset, double bracket) {
  ProfileCoefficients c;
  c.m = m;
  c.kappa = kappa;
  c.lambda = lambda;
  c.mu = mu;
  c.nu = nu;
  c.nu_offset = nu_offset;
  c.bracket = std::isfinite(bracket) ? bracket : 2.0 * lambda + kappa * mu / (m + 1);
  c.nu0 = factorial(m + 1) * c.bracket / ipow(mu, m + 2);
  c.linear = kappa / (m + 1);
  c.drift = -2.0 * lambda / mu;
  double f = 1.0;
  for (int j = 0; j <= m; ++j) {
    if (j > 0) f /= j;
    c.inv_fact[static_cast<std::size_t>(j)] = f;
  }
  for (int j = 0; j < kSeriesTerms; ++j) {
    c.series_ratio[static_cast<std::size_t>(j)] = 1.0 / (j + 2 + m + 1);
  }
  c.series_lead = c.bracket / (m + 2);
  return c;
}

namespace scalar {

double phi_one(const ProfileCoefficients& c, double sigma) {
  const double x = c.mu * sigma;
  const double inv_sm = ipow(sigma, -c.m);
  if (std::abs(x) < 1.0) {
    double term = c.series_lead * sigma * sigma;
    double sum = term;
    for (int j = 0; j < kSeriesTerms - 1; ++j) {
      term *= x * c.series_ratio[static_cast<std::size_t>(j)];
      sum += term;
    }
    double head = c.linear * sigma + sum;
    if (c.nu_offset != 0.0) head += c.nu_offset * std::exp(x) * inv_sm;
    return head;
  }
  double poly = c.inv_fact[static_cast<std::size_t>(c.m)];
  for (int j = c.m - 1; j >= 0; --j) poly = poly * x + c.inv_fact[static_cast<std::size_t>(j)];
  double value = c.drift * sigma - c.nu0 * inv_sm * poly;
  if (c.nu != 0.0) value += c.nu * std::exp(x) * inv_sm;
  return value;
}

void phi_batch(const ProfileCoefficients& c, std::span<const double> sigma, std::span<double> out) {
  require(sigma.size() == out.size(), "phi_batch: size mismatch");
  for (std::size_t i = 0; i < sigma.size(); ++i) out[i] = phi_one(c, sigma[i]);
}

}  // namespace scalar
}  // namespace calabi::kernels

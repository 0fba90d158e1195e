#include "calabi/scalar_soliton.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "calabi/error.hpp"

namespace calabi {
namespace {

void check_scalar(int m, double mu) {
  require(m >= 1 && m <= kMaxDimension, "scalar soliton dimension m must lie in [1, " +
                                            std::to_string(kMaxDimension) + "]");
  if (mu == 0.0) throw DegenerateSoliton("mu = 0: the scalar soliton field is trivial");
  require(std::isfinite(mu), "mu must be finite");
}

// m!/(m-j)!
double falling(int m, int j) {
  double v = 1.0;
  for (int i = 0; i < j; ++i) v *= m - i;
  return v;
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return falling(n, k) / factorial(k);
}

// c2 e^{mu}: the coefficient of e^{mu (sigma - 1)} sigma^{-m}.
double c2_scaled(int m, double kappa, double c, double mu) {
  double s1 = 0.0, s2 = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double f = falling(m, j);
    if (j >= 1) s1 += f / ipow(mu, j + 1);
    s2 += f / ipow(mu, j + 2);
  }
  return kappa * s1 - c * s2;
}

}  // namespace

ScalarConstants constants_c1_c2(int m, double kappa, double c, double mu) {
  check_scalar(m, mu);
  return {-kappa + c / (m + 1), std::exp(-mu) * c2_scaled(m, kappa, c, mu)};
}

ScalarSolitonProfile::ScalarSolitonProfile(int m, double kappa, double c, double mu)
    : m_(m), kappa_(kappa), c_(c), mu_(mu) {
  check_scalar(m, mu);
  require(std::isfinite(kappa) && std::isfinite(c), "kappa and c must be finite");
  const ScalarConstants k = constants_c1_c2(m, kappa, c, mu);
  c1_ = k.c1;
  c2_ = k.c2;
  c2_scaled_ = c2_scaled(m, kappa, c, mu);

  // R(1 + t) = sum_{n=1}^{m+1} r_n t^n (R(1) = 0 by the choice of c1).
  r_.assign(static_cast<std::size_t>(m + 2), 0.0);
  for (int n = 1; n <= m + 1; ++n) r_[static_cast<std::size_t>(n)] = kappa * binom(m, n) - c * binom(m + 1, n) / (m + 1);
}

double ScalarSolitonProfile::convolution_y(double tau) const {
  // y(1 + tau) = int_0^tau e^{mu (tau - t)} R(1 + t) dt = sum_n r_n n! tau^{n+1} e_n(mu tau),
  // e_n(x) = sum_k x^k/(n+k+1)!.
  const double x = mu_ * tau;
  const int top = m_ + 1;
  std::vector<double> e(static_cast<std::size_t>(top + 1));
  if (std::abs(x) < top + 2.0) {
    for (int n = 0; n <= top; ++n) {
      double term = 1.0 / factorial(n + 1);
      double sum = term;
      for (int k = 1; k < 200; ++k) {
        term *= x / (n + k + 1);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      }
      e[static_cast<std::size_t>(n)] = sum;
    }
  } else {
    e[0] = std::expm1(x) / x;
    for (int n = 1; n <= top; ++n) e[static_cast<std::size_t>(n)] = (e[static_cast<std::size_t>(n - 1)] - 1.0 / factorial(n)) / x;
  }
  double y = 0.0;
  double tp = tau;  // tau^{n+1}
  for (int n = 1; n <= top; ++n) {
    tp *= tau;
    y += r_[static_cast<std::size_t>(n)] * factorial(n) * tp * e[static_cast<std::size_t>(n)];
  }
  return y;
}

double ScalarSolitonProfile::closed_form(double sigma) const {
  double sum = 0.0;
  double inv = 1.0;  // sigma^{-j}
  for (int j = 0; j <= m_; ++j) {
    sum += falling(m_, j) * inv / ipow(mu_, j + 1);
    inv /= sigma;
  }
  const double inv_m = ipow(sigma, -m_);
  return -(kappa_ - c_ / mu_) * sum + c_ * sigma / (mu_ * (m_ + 1)) - c1_ / mu_ * inv_m +
         c2_scaled_ * std::exp(mu_ * (sigma - 1.0)) * inv_m;
}

double ScalarSolitonProfile::phi(double sigma) const {
  require(sigma >= 1.0, "phi_scalar needs sigma >= 1");
  const double tau = sigma - 1.0;
  // Beyond |mu| tau = 40 the homogeneous term is below rounding and the closed
  // form has no cancellation left.
  if (std::abs(mu_) * tau <= 40.0) return convolution_y(tau) / ipow(sigma, m_);
  return closed_form(sigma);
}

double ScalarSolitonProfile::first_integral_rhs(double sigma) const {
  // kappa (sigma^m - 1) - c (sigma^{m+1} - 1)/(m+1), written to keep digits near sigma = 1.
  const double l = std::log1p(sigma - 1.0);
  return kappa_ * std::expm1(m_ * l) - c_ * std::expm1((m_ + 1) * l) / (m_ + 1);
}

std::array<double, 3> ScalarSolitonProfile::y_jet(double sigma) const {
  const double y = ipow(sigma, m_) * phi(sigma);
  const double rhs = first_integral_rhs(sigma);
  const double d_rhs = m_ * kappa_ * ipow(sigma, m_ - 1) - c_ * ipow(sigma, m_);
  const double y1 = mu_ * y + rhs;
  return {y, y1, mu_ * y1 + d_rhs};
}

double ScalarSolitonProfile::phi_prime(double sigma) const {
  const auto [y, y1, y2] = y_jet(sigma);
  (void)y2;
  return y1 / ipow(sigma, m_) - m_ * y / ipow(sigma, m_ + 1);
}

double ScalarSolitonProfile::phi_second(double sigma) const {
  const auto [y, y1, y2] = y_jet(sigma);
  return y2 / ipow(sigma, m_) - 2.0 * m_ * y1 / ipow(sigma, m_ + 1) + m_ * (m_ + 1.0) * y / ipow(sigma, m_ + 2);
}

double phi_scalar(const ScalarSolitonProfile& pr, double sigma) { return pr.phi(sigma); }

namespace {

double fd_step(double sigma) { return std::min(sigma / 64.0, (sigma - 1.0) / 5.0); }

}  // namespace

double scalar_ode_residual(const ScalarSolitonProfile& pr, double sigma) {
  require(sigma > 1.0, "scalar_ode_residual needs sigma > 1");
  const int m = pr.m();
  // Scaled by sigma^{-m} so the stencil works on O(1) quantities.
  auto g = [&](double x) { return ipow(x / sigma, m) * pr.phi(x); };
  const double h = fd_step(sigma);
  const double d1 = central_difference8(g, sigma, h);
  const double d2 = central_second_difference8(g, sigma, h);
  return d2 - pr.mu() * d1 - m * pr.kappa() / sigma + pr.c();
}

double scalar_first_integral_residual(const ScalarSolitonProfile& pr, double sigma) {
  require(sigma > 1.0, "first integral residual needs sigma > 1");
  const int m = pr.m();
  auto g = [&](double x) { return ipow(x / sigma, m) * pr.phi(x); };
  const double h = fd_step(sigma);
  const double d1 = central_difference8(g, sigma, h);
  const double rhs = pr.kappa() - pr.c() * sigma / (m + 1) + pr.c1() * ipow(sigma, -m);
  return d1 - pr.mu() * pr.phi(sigma) - rhs;
}

bool positivity_certificate(const ScalarSolitonProfile& pr, double sigma_max) {
  const int m = pr.m();
  require(pr.kappa() - pr.c() / (m + 1) >= 0.0, "positivity certificate needs kappa - c/(m+1) >= 0");
  require(pr.c() < 0.0, "positivity certificate needs c < 0");
  require(pr.mu() < 0.0, "positivity certificate needs mu < 0");
  require(sigma_max > 1.0, "positivity certificate needs sigma_max > 1");
  const int n = 2000;
  const double lo = 1e-8, hi = sigma_max - 1.0;
  for (int i = 0; i < n; ++i) {
    const double tau = lo * std::pow(hi / lo, double(i) / (n - 1));
    const double sigma = 1.0 + tau;
    const double phi = pr.phi(sigma);
    if (!(phi > 0.0)) return false;
    if (tau < 1e-3) continue;  // stencil needs room inside (1, inf)
    auto g = [&](double x) { return ipow(x / sigma, m) * pr.phi(x); };
    const double lhs = central_difference8(g, sigma, fd_step(sigma)) - pr.mu() * phi;
    const double bound = -(pr.c() / (m + 1)) * tau / ipow(sigma, m);
    if (!(lhs >= bound * (1.0 - 1e-6) - 1e-12 * (1.0 + std::abs(pr.c()) + std::abs(pr.kappa())))) return false;
  }
  return true;
}

RicciSpecialization ricci_specialize(int m, double kappa) {
  require(m >= 1, "m must be positive");
  if (kappa != -2.0 && kappa != 2.0) {
    throw InvalidParameter("Ricci specialization needs kappa = -2 lambda with lambda = +-1, i.e. kappa in {-2, 2}");
  }
  const int lambda = kappa < 0.0 ? 1 : -1;
  return {(m + 1) * kappa, lambda, kappa < 0.0};
}

std::vector<double> oracle_integrate_scalar(int m, double kappa, double c, double mu,
                                            std::span<const double> sigma_out) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;
  check_scalar(m, mu);
  const double c1 = -kappa + c / (m + 1);
  auto sys = [=](const State& y, State& dy, double s) {
    dy[0] = mu * y[0] + kappa * ipow(s, m) - c * ipow(s, m + 1) / (m + 1) + c1;
  };
  std::vector<double> out;
  out.reserve(sigma_out.size());
  std::vector<double> times;
  times.push_back(1.0);
  for (double s : sigma_out) {
    require(s >= 1.0 && s >= times.back(), "oracle sigma grid must be increasing and >= 1");
    times.push_back(s);
  }
  State y{0.0};
  std::vector<double> ys;
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(1e-30, 1e-13);
  odeint::integrate_times(stepper, sys, y, times.begin(), times.end(), 1e-4,
                          [&](const State& st, double) { ys.push_back(st[0]); });
  for (std::size_t i = 0; i < sigma_out.size(); ++i) out.push_back(ys[i + 1] / ipow(sigma_out[i], m));
  return out;
}

}  // namespace calabi

#include "calabi/mu_solver.hpp"

#include <cmath>
#include <string>

#include "calabi/error.hpp"
#include "calabi/numeric.hpp"

namespace calabi {
namespace {

void check_inputs(int m, double kappa, double a) {
  require(m >= 1 && m <= kMaxDimension, "m out of range");
  require(kappa > 0.0, "mu solver needs kappa > 0");
  require(a > 0.0, "mu solver needs a > 0");
}

struct PolyValue {
  double p;
  double dp;
  double abs_sum;  // sum |c_j| mu^j
};

PolyValue horner(const std::vector<double>& c, double mu) {
  PolyValue v{0.0, 0.0, 0.0};
  for (std::size_t j = c.size(); j-- > 0;) {
    v.dp = v.dp * mu + v.p;
    v.p = v.p * mu + c[j];
    v.abs_sum = v.abs_sum * mu + std::abs(c[j]);
  }
  return v;
}

double prefactor(int m, double a, double mu) {
  return factorial(m + 1) / (ipow(a, m) * ipow(mu, m + 2));
}

}  // namespace

std::vector<double> mu_polynomial(int m, double kappa, double a) {
  check_inputs(m, kappa, a);
  std::vector<double> c(static_cast<std::size_t>(m + 2));
  double a_pow = 1.0 / a;  // a^{j-1}
  double inv_fact = 1.0;
  for (int j = 0; j <= m + 1; ++j) {
    if (j > 0) inv_fact /= j;
    // (2a(m+1) - kappa j)/(m+1) is zero exactly when 2a = kappa j/(m+1).
    const double lead = (2.0 * a * (m + 1) - kappa * j) / (m + 1);
    c[static_cast<std::size_t>(j)] = lead * a_pow * inv_fact;
    a_pow *= a;
  }
  return c;
}

double f_eval(int m, double kappa, double a, double mu) {
  require(mu > 0.0, "f_eval needs mu > 0");
  const auto c = mu_polynomial(m, kappa, a);
  return prefactor(m, a, mu) * horner(c, mu).p;
}

std::vector<int> coefficient_signs(int m, double kappa, double a) {
  const auto c = mu_polynomial(m, kappa, a);
  std::vector<int> s;
  s.reserve(c.size());
  for (double v : c) s.push_back(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
  return s;
}

int count_sign_changes(const std::vector<int>& signs) {
  int changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

MuRootCertificate solve_mu(int m, double kappa, double a) {
  check_inputs(m, kappa, a);
  if (!(a < kappa / 2.0)) {
    throw InvalidParameter("solve_mu needs 0 < a < kappa/2 (a = " + std::to_string(a) +
                           ", kappa/2 = " + std::to_string(kappa / 2.0) + ")");
  }
  const auto c = mu_polynomial(m, kappa, a);
  const int changes = count_sign_changes(coefficient_signs(m, kappa, a));

  const double lower = 2.0 * (m + 1) / kappa;
  double lo = lower;
  double hi = 2.0 * lower;
  if (!(horner(c, lo).p > 0.0)) throw NonConvergence("f(a, 2(m+1)/kappa) is not positive");
  while (horner(c, hi).p >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > std::ldexp(1.0, 60)) throw NonConvergence("mu bracket expansion exceeded 2^60");
  }

  // Bisection down to width 1e-3 (relative to the bracket scale).
  while (hi - lo > 1e-3 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (horner(c, mid).p > 0.0) lo = mid; else hi = mid;
  }

  // Safeguarded Newton on the polynomial; the bracket keeps p(lo) > 0 > p(hi).
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const PolyValue v = horner(c, mu);
    if (v.p == 0.0) break;
    if (v.p > 0.0) lo = mu; else hi = mu;
    if (std::abs(v.p) <= 1e-15 * v.abs_sum) break;
    double next = (v.dp != 0.0) ? mu - v.p / v.dp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - mu) <= 4e-16 * mu) {
      mu = next;
      break;
    }
    mu = next;
  }

  // With delta = mu - lower the sum is 2 x^{m+1}/(m+1)! - kappa delta T_m(x)/(m+1),
  // x = mu a, T_m the degree-m exponential polynomial. Newton in delta resolves it
  // to relative precision even when mu is within a few ulps of lower.
  double delta = mu - lower;
  for (int it = 0; it < 20 && delta > 0.0; ++it) {
    const double x = (lower + delta) * a;
    double t = 1.0, tm1 = 1.0, term = 1.0;  // T_m(x), T_{m-1}(x)
    for (int j = 1; j <= m; ++j) {
      term *= x / j;
      if (j < m) tm1 += term;
      t += term;
    }
    const double top = term * x / (m + 1);  // x^{m+1}/(m+1)!
    const double h = 2.0 * top - kappa * delta * t / (m + 1);
    const double dh = 2.0 * a * term - kappa / (m + 1) * (t + delta * a * tm1);
    const double step = h / dh;
    delta -= step;
    if (std::abs(step) <= 1e-16 * delta) break;
  }
  if (!(delta > 0.0)) throw NonConvergence("mu root refinement left the bracket");
  mu = lower + delta;

  const PolyValue v = horner(c, mu);
  const double pre = prefactor(m, a, mu);
  return MuRootCertificate{mu, lower, changes, std::abs(pre * v.p), pre * v.abs_sum, delta};
}

int scan_root_count(int m, double kappa, double a, double lo, double hi, int points) {
  const auto c = mu_polynomial(m, kappa, a);
  int count = 0;
  int last = 0;
  for (int i = 0; i < points; ++i) {
    const double mu = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const double p = horner(c, mu).p;
    const int s = p > 0.0 ? 1 : (p < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace calabi

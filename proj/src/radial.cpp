#include "calabi/radial.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "calabi/error.hpp"

namespace calabi {
namespace odeint = boost::numeric::odeint;

namespace {

// Quintic Hermite interpolation on [0,1] from value, first and second derivative
// at both ends (derivatives already scaled by h and h^2).
double hermite5(double t, double y0, double d0, double dd0, double y1, double d1, double dd1) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double h3 = 0.5 * t3 - t4 + 0.5 * t5;
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
  return y0 * h0 + d0 * h1 + dd0 * h2 + y1 * h5 + d1 * h4 + dd1 * h3;
}

// 3-point Gauss-Legendre on [0,1]; exact for the quintic interpolant.
constexpr std::array<double, 3> kGaussNodes = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

double sigma_second(const SolitonProfile& pr, double sigma, double phi) {
  return ((pr.mu() - pr.m() / sigma) * phi + pr.kappa() + 2.0 * pr.lambda() * sigma) * phi;
}

using State1 = std::array<double, 1>;
using State2 = std::array<double, 2>;

// Steps a controlled stepper from t to each target in turn (monotone in the
// direction of travel). `valid` rejects states outside the domain; when it
// fails, integration stops and false is returned. Step collapse throws.
template <class Stepper, class System, class State, class OnTarget, class Valid>
bool drive(Stepper& stepper, System&& sys, State& x, double t, std::span<const double> targets,
           double initial_step, OnTarget&& on_target, Valid&& valid) {
  const double dir = targets.empty() ? 1.0 : (targets.back() >= t ? 1.0 : -1.0);
  double dt = dir * initial_step;
  for (double target : targets) {
    while (t != target) {
      const double remaining = target - t;
      const bool truncated = std::abs(remaining) < std::abs(dt);
      double step = truncated ? remaining : dt;
      const State saved = x;
      const double t_saved = t;
      int failures = 0;
      for (;;) {
        const auto res = stepper.try_step(sys, x, t, step);
        if (res == odeint::success) break;
        if (++failures > 500 || std::abs(step) < 1e-13 * (1.0 + std::abs(t))) {
          throw NonConvergence("radial integration: step size collapsed at s = " + std::to_string(t));
        }
      }
      if (!valid(x)) {
        x = saved;
        t = t_saved;
        return false;
      }
      if (!truncated || failures > 0) dt = step;
    }
    on_target(x);
  }
  return true;
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(std::abs(ys[i]));
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(std::abs(ys[i])) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

bool left_endpoint_vanishes(const SolitonProfile& pr) {
  if (pr.a() > 0.0) return pr.anchored_at_left();
  return pr.coefficients().nu_offset == 0.0;
}

struct RightTaylor {
  bool vanishes = false;
  std::array<double, kTaylorTerms> coeffs{};
};

RightTaylor right_taylor(const SolitonProfile& pr) {
  RightTaylor rt;
  if (!std::isfinite(pr.b())) return rt;
  const double at_b = pr.phi(pr.b());
  if (std::abs(at_b) <= 1e-10 * (1.0 + std::abs(pr.kappa()))) {
    rt.vanishes = true;
    rt.coeffs = pr.taylor<kTaylorTerms>(pr.b(), 0.0);
  }
  return rt;
}

// phi(b - tau) with the Taylor expansion at b close to the endpoint.
double phi_from_right(const SolitonProfile& pr, const RightTaylor& rt, double tau) {
  if (rt.vanishes && tau < 0.1 * pr.b()) {
    double v = 0.0;
    for (std::size_t n = rt.coeffs.size(); n-- > 1;) v = (v + rt.coeffs[n]) * (-tau);
    return v;
  }
  return pr.phi(pr.b() - tau);
}

std::array<double, 13> order_grid() {
  std::array<double, 13> t{};
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::pow(10.0, -8.0 + 0.5 * static_cast<double>(i));
  return t;
}

}  // namespace

RadialSolution::RadialSolution(SolitonProfile profile, double sigma0, std::vector<RadialSample> samples,
                               double s_min, double s_max, bool clipped_low, bool clipped_high)
    : profile_(std::move(profile)),
      sigma0_(sigma0),
      samples_(std::move(samples)),
      s_min_(s_min),
      s_max_(s_max),
      clipped_low_(clipped_low),
      clipped_high_(clipped_high) {}

std::size_t RadialSolution::interval(double s) const {
  if (samples_.size() < 2 || s < samples_.front().s || s > samples_.back().s) {
    throw InvalidParameter("s = " + std::to_string(s) + " lies outside the sampled window [" +
                           std::to_string(samples_.empty() ? 0.0 : samples_.front().s) + ", " +
                           std::to_string(samples_.empty() ? 0.0 : samples_.back().s) + "]");
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                             [](double v, const RadialSample& r) { return v < r.s; });
  std::size_t i = static_cast<std::size_t>(std::distance(samples_.begin(), it));
  if (i == 0) i = 1;
  if (i >= samples_.size()) i = samples_.size() - 1;
  return i - 1;
}

double RadialSolution::sigma_at(double s) const {
  const std::size_t i = interval(s);
  const auto& l = samples_[i];
  const auto& r = samples_[i + 1];
  const double h = r.s - l.s;
  const double t = (s - l.s) / h;
  return hermite5(t, l.sigma, h * l.phi, h * h * sigma_second(profile_, l.sigma, l.phi), r.sigma, h * r.phi,
                  h * h * sigma_second(profile_, r.sigma, r.phi));
}

double RadialSolution::potential_at(double s) const {
  require(has_potential_, "potential requested before reconstruct_F");
  const std::size_t i = interval(s);
  const auto& l = samples_[i];
  const auto& r = samples_[i + 1];
  const double h = r.s - l.s;
  const double t = (s - l.s) / h;
  return hermite5(t, l.potential, h * l.sigma, h * h * l.phi, r.potential, h * r.sigma, h * h * r.phi);
}

double default_sigma0(const SolitonProfile& pr) { return pr.a() > 0.0 ? pr.a() + 1.0 : 1.0; }

RadialSolution integrate_sigma(const SolitonProfile& pr, double sigma0, double s_min, double s_max, int n,
                               const IntegrationOptions& opt) {
  require(n >= 2, "integrate_sigma needs at least 2 samples");
  require(s_min <= 0.0 && 0.0 <= s_max && s_min < s_max, "integrate_sigma needs s_min <= 0 <= s_max");
  require(sigma0 > pr.a() && sigma0 < pr.b(), "sigma0 must lie inside (a, b)");
  require(pr.phi(sigma0) > 0.0, "phi(sigma0) must be positive");

  const double a = pr.a();
  const double b = pr.b();
  auto sys = [&pr](const State2& x, State2& dxdt, double) {
    const double phi = pr.phi_tau(x[0]);
    dxdt[0] = phi;
    dxdt[1] = std::sqrt(std::max(phi, 0.0));
  };
  auto valid = [&](const State2& x) {
    const double tau = x[0];
    return std::isfinite(tau) && tau > 0.0 && a + tau < b && a + tau < 1e300 && pr.phi_tau(tau) > 0.0;
  };

  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = s_min + (s_max - s_min) * i / (n - 1);
  grid.back() = s_max;

  std::vector<double> fwd, bwd;
  for (double s : grid) (s >= 0.0 ? fwd : bwd).push_back(s);
  std::reverse(bwd.begin(), bwd.end());

  auto make_sample = [&](double s, const State2& x) {
    const double tau = x[0];
    return RadialSample{s, a + tau, pr.phi_tau(tau), 0.0, 0.0, x[1], 0.0};
  };

  std::vector<RadialSample> hi_samples, lo_samples;
  bool clipped_high = false, clipped_low = false;
  {
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State2>>(opt.abs_tol, opt.rel_tol);
    State2 x{sigma0 - a, 0.0};
    std::size_t k = 0;
    clipped_high = !drive(stepper, sys, x, 0.0, fwd, opt.initial_step,
                          [&](const State2& st) { hi_samples.push_back(make_sample(fwd[k++], st)); }, valid);
  }
  {
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State2>>(opt.abs_tol, opt.rel_tol);
    State2 x{sigma0 - a, 0.0};
    std::size_t k = 0;
    clipped_low = !drive(stepper, sys, x, 0.0, bwd, opt.initial_step,
                         [&](const State2& st) { lo_samples.push_back(make_sample(bwd[k++], st)); }, valid);
  }
  std::reverse(lo_samples.begin(), lo_samples.end());
  lo_samples.insert(lo_samples.end(), hi_samples.begin(), hi_samples.end());
  if (lo_samples.size() < 2) throw NonConvergence("integrate_sigma: fewer than two valid samples");
  return RadialSolution(pr, sigma0, std::move(lo_samples), s_min, s_max, clipped_low, clipped_high);
}

RadialSolution reconstruct_F(RadialSolution sol) {
  auto& smp = sol.mutable_samples();
  const auto& pr = sol.profile();
  const std::size_t n = smp.size();
  require(n >= 2, "reconstruct_F needs samples");
  require(smp.front().s <= 0.0 && smp.back().s >= 0.0, "reconstruct_F needs s = 0 inside the samples");

  // Integral of (sigma - 1) over [s_i, s_i + t h], t in (0, 1], from the quintic interpolant.
  auto partial = [&](std::size_t i, double t) {
    const auto& l = smp[i];
    const auto& r = smp[i + 1];
    const double h = r.s - l.s;
    const double d0 = h * l.phi, dd0 = h * h * sigma_second(pr, l.sigma, l.phi);
    const double d1 = h * r.phi, dd1 = h * h * sigma_second(pr, r.sigma, r.phi);
    double acc = 0.0;
    for (std::size_t g = 0; g < 3; ++g) {
      const double u = t * kGaussNodes[g];
      acc += kGaussWeights[g] * (hermite5(u, l.sigma, d0, dd0, r.sigma, d1, dd1) - 1.0);
    }
    return acc * t * h;
  };

  std::vector<double> cum(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) cum[i + 1] = cum[i] + partial(i, 1.0);

  // Cumulative integral at s = 0.
  std::size_t k = 0;
  while (k + 1 < n && smp[k + 1].s <= 0.0) ++k;
  double at_zero = cum[k];
  if (smp[k].s < 0.0 && k + 1 < n) {
    const double t = (0.0 - smp[k].s) / (smp[k + 1].s - smp[k].s);
    at_zero += partial(k, t);
  }

  for (std::size_t i = 0; i < n; ++i) {
    smp[i].F = cum[i] - at_zero;
    smp[i].potential = smp[i].s + smp[i].F;
    smp[i].residual = ode_residual(pr, smp[i].sigma);
  }
  sol.mark_potential();
  return sol;
}

RadialSolution solve_radial(const SolitonProfile& pr, double sigma0, double s_min, double s_max, int n,
                            const IntegrationOptions& opt) {
  return reconstruct_F(integrate_sigma(pr, sigma0, s_min, s_max, n, opt));
}

double vanishing_order_left(const SolitonProfile& pr) {
  if (!left_endpoint_vanishes(pr)) return 0.0;
  const auto taus = order_grid();
  std::array<double, 13> vals{};
  for (std::size_t i = 0; i < taus.size(); ++i) vals[i] = pr.phi_tau(taus[i]);
  return loglog_slope(taus, vals);
}

double vanishing_order_right(const SolitonProfile& pr) {
  const RightTaylor rt = right_taylor(pr);
  if (!rt.vanishes) return 0.0;
  const auto taus = order_grid();
  std::array<double, 13> vals{};
  for (std::size_t i = 0; i < taus.size(); ++i) vals[i] = phi_from_right(pr, rt, taus[i]);
  return loglog_slope(taus, vals);
}

double growth_exponent_numeric(const SolitonProfile& pr) {
  std::array<double, 9> xs{}, ys{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = std::pow(10.0, 3.0 + 0.25 * static_cast<double>(i));
    ys[i] = pr.phi(xs[i]);
    if (!std::isfinite(ys[i])) return kInfinity;
  }
  const double slope = loglog_slope(xs, ys);
  return std::isfinite(slope) ? slope : kInfinity;
}

double growth_exponent_analytic(const SolitonProfile& pr) {
  if (pr.mu() > 0.0 && pr.nu() != 0.0) return kInfinity;  // e^{mu sigma}
  if (pr.lambda() != 0) return 1.0;                        // -2 lambda sigma/mu
  if (pr.kappa() != 0.0) return 0.0;                       // -kappa/mu
  return -static_cast<double>(pr.m() + 1);
}

double geodesic_length(const SolitonProfile& pr, double tau_from, double tau_to) {
  const double a = pr.a();
  const double b = pr.b();
  require(tau_from >= 0.0 && tau_to > tau_from, "geodesic_length needs 0 <= tau_from < tau_to");
  require(a + tau_to <= b || (std::isinf(tau_to) && std::isinf(b)), "geodesic_length range exceeds (a, b)");

  if (tau_from == 0.0 && left_endpoint_vanishes(pr) && vanishing_order_left(pr) >= 2.0 - 1e-2) {
    return kInfinity;
  }
  const RightTaylor rt = right_taylor(pr);
  const bool to_right_end = std::isfinite(b) && a + tau_to >= b;
  if (to_right_end && rt.vanishes && vanishing_order_right(pr) >= 2.0 - 1e-2) return kInfinity;
  if (std::isinf(tau_to) && growth_exponent_numeric(pr) <= 2.0 + 1e-2) return kInfinity;

  auto phi_at = [&](double tau, double dist_right) {
    if (to_right_end && dist_right < 0.1 * b) return phi_from_right(pr, rt, dist_right);
    return pr.phi_tau(tau);
  };

  boost::math::quadrature::tanh_sinh<double> ts;
  const double upper = std::isinf(tau_to) ? tau_from + 1.0 : tau_to;
  const double mid = 0.5 * (tau_from + upper);
  auto integrand = [&](double x, double xc) {
    // xc: signed distance to the nearer endpoint (negative on the left half).
    const double tau = (x < mid) ? tau_from - xc : x;
    const double dist_right = (x < mid) ? upper - x : xc;
    const double phi = phi_at(tau, dist_right);
    if (!(phi > 0.0)) return 0.0;
    return 1.0 / std::sqrt(phi);
  };
  double total = ts.integrate(integrand, tau_from, upper);
  if (std::isinf(tau_to)) {
    boost::math::quadrature::exp_sinh<double> es;
    total += es.integrate([&](double tau) { return 1.0 / std::sqrt(pr.phi_tau(tau)); }, upper, kInfinity);
  }
  return total;
}

AsymptoticEstimate asymptotic_coefficient(const RadialSolution& sol, double mu, double max_rel_error) {
  require(mu != 0.0, "asymptotic_coefficient needs mu != 0");
  const auto& smp = sol.samples();
  const std::size_t n = smp.size();
  const std::size_t tail = std::max<std::size_t>(8, n / 10);
  if (n < tail || n < 8) throw NonConvergence("asymptotic_coefficient: insufficient tail data");

  constexpr std::size_t kPoints = 6;
  std::array<double, kPoints> xs{}, gs{};
  for (std::size_t i = 0; i < kPoints; ++i) {
    const std::size_t idx = n - 1 - i * (tail - 1) / (kPoints - 1);
    const double x = std::exp(-2.0 * smp[idx].s / std::abs(mu));
    xs[i] = x;
    gs[i] = smp[idx].sigma * x;
  }
  if (!(xs[0] < 1e-2)) throw NonConvergence("asymptotic_coefficient: tail does not reach the asymptotic regime");

  // Neville tableau at x = 0; estimates[k] uses the k+1 points closest to 0.
  std::array<double, kPoints> p = gs;
  std::array<double, kPoints> estimates{};
  estimates[0] = p[0];
  for (std::size_t k = 1; k < kPoints; ++k) {
    for (std::size_t i = 0; i + k < kPoints; ++i) {
      p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
    }
    estimates[k] = p[0];
  }
  double best = estimates[1];
  double err = std::abs(estimates[1] - estimates[0]);
  for (std::size_t k = 2; k < kPoints; ++k) {
    const double d = std::abs(estimates[k] - estimates[k - 1]);
    if (d < err) {
      err = d;
      best = estimates[k];
    }
  }
  if (!(best > 0.0) || !std::isfinite(best)) throw NonConvergence("asymptotic_coefficient: non-positive limit");
  const double rel = err / best;
  if (rel > max_rel_error) {
    throw NonConvergence("asymptotic_coefficient: extrapolation error " + std::to_string(rel) +
                         " exceeds tolerance");
  }
  return {best, rel, static_cast<int>(kPoints)};
}

std::vector<double> oracle_integrate_linear(int m, double kappa, int lambda, double mu, double sigma_start,
                                            double phi_start, std::span<const double> sigma_out) {
  require(sigma_start > 0.0, "oracle integration needs sigma_start > 0");
  for (double s : sigma_out) require(s > 0.0, "oracle integration cannot cross sigma = 0");
  auto sys = [=](const State1& y, State1& dy, double sigma) {
    dy[0] = (mu - m / sigma) * y[0] + kappa + 2.0 * lambda * sigma;
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State1>>(1e-20, 1e-13);
  State1 y{phi_start};
  std::vector<double> out;
  out.reserve(sigma_out.size());
  const double step = 1e-4 * std::max(1.0, sigma_start);
  drive(stepper, sys, y, sigma_start, sigma_out, step, [&](const State1& st) { out.push_back(st[0]); },
        [](const State1& st) { return std::isfinite(st[0]); });
  if (out.size() != sigma_out.size()) throw NonConvergence("oracle integration diverged");
  return out;
}

double oracle_integrate_linear(int m, double kappa, int lambda, double mu, double sigma_start, double phi_start,
                               double sigma_end) {
  const double target[] = {sigma_end};
  return oracle_integrate_linear(m, kappa, lambda, mu, sigma_start, phi_start, target).front();
}

std::string radial_csv(const RadialSolution& sol) {
  std::string out = "s,sigma,phi,F,potential,length,residual\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
    out.push_back(sep);
  };
  for (const auto& r : sol.samples()) {
    put(r.s, ',');
    put(r.sigma, ',');
    put(r.phi, ',');
    put(r.F, ',');
    put(r.potential, ',');
    put(r.length, ',');
    put(r.residual, '\n');
  }
  return out;
}

}  // namespace calabi

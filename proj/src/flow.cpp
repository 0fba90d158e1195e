#include "calabi/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "calabi/error.hpp"

namespace calabi {

SelfSimilarFlow make_flow(const SolitonProfile& pr) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (pr.lambda()) {
    case 1: return {pr, 1, pr.mu(), 0.0, inf};
    case -1: return {pr, -1, pr.mu(), -inf, 0.0};
    default: return {pr, 0, pr.mu(), -inf, inf};
  }
}

double flow_potential(const SelfSimilarFlow& fl, const RadialSolution& sol, double t, double r) {
  require(r > 0.0, "flow_potential needs r > 0");
  require(t > fl.t_min && t < fl.t_max,
          "t = " + std::to_string(t) + " lies outside the time domain of the flow");
  const double s = std::log(r);
  switch (fl.lambda) {
    case 1: return t * sol.potential_at(s + 0.5 * fl.mu * std::log(t));
    case -1: return -t * sol.potential_at(s - 0.5 * fl.mu * std::log(-t));
    default: return sol.potential_at(s + 0.5 * fl.mu * t);
  }
}

ConeAperture cone_limit(const SelfSimilarFlow& fl, const RadialSolution& sol) {
  require(fl.lambda != 0, "steady flows have no t -> 0 cone limit");
  const AsymptoticEstimate est = asymptotic_coefficient(sol, fl.mu);
  const double q = fl.lambda == 1 ? -1.0 / fl.mu : 1.0 / fl.mu;
  return ConeAperture(est.value, q);
}

double continuity_deviation(const SelfSimilarFlow& fl, const RadialSolution& sol, const ConeAperture& ap,
                            double t, int points, bool modulo_constant) {
  require(points >= 2, "continuity probe needs at least 2 points");
  std::vector<double> diff(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double r = std::exp(-2.0 + 4.0 * i / (points - 1));
    diff[static_cast<std::size_t>(i)] = flow_potential(fl, sol, t, r) - aperture_potential(ap, r);
  }
  double shift = 0.0;
  if (modulo_constant) {
    for (double d : diff) shift += d;
    shift /= points;
  }
  double worst = 0.0;
  for (double d : diff) worst = std::max(worst, std::abs(d - shift));
  return worst;
}

double flow_window_end(double mu, double probe_time) {
  // s + (|mu|/2) log(1/|t|) for s up to 2, plus room for the tail fit.
  return 4.0 + 0.5 * std::abs(mu) * std::log(1.0 / probe_time) + 4.0 * std::abs(mu);
}

double eternal_potential(const EternalSolution& e, double t, double r) {
  if (t < 0.0) return flow_potential(e.shrinking, e.shrinking_solution, t, r);
  if (t > 0.0) return flow_potential(e.expanding, e.expanding_solution, t, r);
  return aperture_potential(e.aperture, r);
}

EternalSolution glue_eternal(int m, int p, int k, const GlueOptions& opt) {
  if (!(k > 0 && k < p)) {
    throw InvalidParameter("glue needs 0 < k < p (got p = " + std::to_string(p) + ", k = " + std::to_string(k) + ")");
  }
  require(opt.probe_time > 0.0, "probe time must be positive");
  const double kappa = 2.0 * p / k;
  const double a = static_cast<double>(p) / k - 1.0;
  const MuRootCertificate cert = solve_mu(m, kappa, a);
  const double mu_s = cert.root;
  const double mu_e = -mu_s;

  SolitonProfile shrink = SolitonProfile::shrinking(m, kappa, a, cert);
  SolitonProfile expand = SolitonProfile::cone(m, kappa, 1, mu_e);

  const double s_max = flow_window_end(mu_s, opt.probe_time);
  RadialSolution shrink_sol = solve_radial(shrink, default_sigma0(shrink), opt.s_min, s_max, opt.samples);
  RadialSolution expand_raw = solve_radial(expand, default_sigma0(expand), opt.s_min, s_max, opt.samples);

  const double D = asymptotic_coefficient(shrink_sol, mu_s).value;
  const double E = asymptotic_coefficient(expand_raw, mu_e).value;
  const double delta = -0.5 * mu_e * std::log(D / E);
  require(delta > expand_raw.s_front() && delta < expand_raw.s_back(), "translation leaves the sampled window");

  // Re-based solution: s = 0 now sits at sigma(delta).
  const double sigma0 = expand_raw.sigma_at(delta);
  RadialSolution expand_sol = solve_radial(expand, sigma0, opt.s_min, s_max, opt.samples);
  const double E_new = asymptotic_coefficient(expand_sol, mu_e).value;
  const double mismatch = std::abs(E_new - D) / D;
  if (mismatch > opt.amplitude_tol) {
    throw NonConvergence("aperture amplitudes differ by " + std::to_string(mismatch) + " after translation");
  }

  SelfSimilarFlow fs = make_flow(shrink);
  SelfSimilarFlow fe = make_flow(expand);
  ConeAperture ap(D, 1.0 / mu_s);
  const double t = opt.probe_time;
  const double err = std::max(continuity_deviation(fs, shrink_sol, ap, -t, opt.probe_points, true),
                              continuity_deviation(fe, expand_sol, ap, t, opt.probe_points, true));
  const double err_raw = std::max(continuity_deviation(fs, shrink_sol, ap, -t, opt.probe_points, false),
                                  continuity_deviation(fe, expand_sol, ap, t, opt.probe_points, false));

  return EternalSolution{m,     p,     k,     kappa, cert,     fs,        fe,       std::move(shrink_sol),
                         std::move(expand_sol), ap, delta, D, E_new, mismatch, err, err_raw};
}

}  // namespace calabi

#pragma once

// Self-similar Kahler-Ricci flows generated by soliton profiles and the eternal
// solution obtained by gluing a shrinking soliton (t < 0) to an expanding cone
// soliton (t > 0) through their common cone limit at t = 0.

#include <optional>

#include "calabi/mu_solver.hpp"
#include "calabi/radial.hpp"
#include "calabi/sasaki.hpp"

namespace calabi {

struct SelfSimilarFlow {
  SolitonProfile profile;
  int lambda;
  double mu;
  double t_min;  // open time interval
  double t_max;
};

SelfSimilarFlow make_flow(const SolitonProfile& pr);

/// Radial Kahler potential of omega_t at r:
///   lambda = 1:  t P(s + (mu/2) log t)
///   lambda = -1: (-t) P(s - (mu/2) log(-t))
///   lambda = 0:  P(s + mu t/2)
/// with s = log r and P = s + F from the sampled solution.
double flow_potential(const SelfSimilarFlow& fl, const RadialSolution& sol, double t, double r);

/// t -> 0 cone limit: amplitude from asymptotic_coefficient, q = -1/mu (lambda = 1)
/// or 1/mu (lambda = -1).
ConeAperture cone_limit(const SelfSimilarFlow& fl, const RadialSolution& sol);

struct GlueOptions {
  int samples = 6001;
  double s_min = -6.0;
  double probe_time = 1e-6;  // |t| at which continuity is measured
  int probe_points = 81;     // on log r in [-2, 2]
  double amplitude_tol = 1e-8;
};

struct EternalSolution {
  int m, p, k;
  double kappa;
  MuRootCertificate mu_certificate;
  SelfSimilarFlow shrinking;
  SelfSimilarFlow expanding;
  RadialSolution shrinking_solution;
  RadialSolution expanding_solution;  // already translated
  ConeAperture aperture;
  double translation;
  double amplitude_shrink;   // D(0)
  double amplitude_expand;   // E(0) re-extracted after translation
  double amplitude_mismatch; // |E(0) - D(0)|/D(0)
  double continuity_error;   // max over both sides, modulo additive constants
  double continuity_error_raw;
};

/// Radial potential of the eternal solution; t = 0 gives the aperture cone.
double eternal_potential(const EternalSolution& e, double t, double r);

/// max over r of |flow_potential(t, r) - aperture_potential(r)| on log r in
/// [-2, 2]. With `modulo_constant` the mean difference is removed first.
double continuity_deviation(const SelfSimilarFlow& fl, const RadialSolution& sol, const ConeAperture& ap,
                            double t, int points, bool modulo_constant);

/// Builds the (kappa = 2p/k, a = p/k - 1, nu = 0) shrinking soliton, the expanding
/// cone with mu_e = -mu_s and the same kappa, and translates the expanding side so
/// the amplitudes agree. Requires 0 < k < p.
EternalSolution glue_eternal(int m, int p, int k, const GlueOptions& opt = {});

/// Upper window end that keeps the t -> 0 probe and the tail extrapolation inside
/// the sampled range.
double flow_window_end(double mu, double probe_time);

}  // namespace calabi

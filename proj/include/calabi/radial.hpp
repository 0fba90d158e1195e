#pragma once

// Reconstruction of the radial data of a Calabi-ansatz metric from its profile:
//   s = int_{sigma0}^{sigma(s)} dx/phi(x),   F(s) = int_0^s (sigma - 1) ds,
// potential P = s + F (so omega = i ddbar P, dP/ds = sigma, d^2P/ds^2 = phi),
// and geodesic length l(s) = int_0^s sqrt(phi) ds along the radial direction.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calabi/profile.hpp"

namespace calabi {

struct RadialSample {
  double s;
  double sigma;
  double phi;
  double F;
  double potential;
  double length;
  double residual;
};

struct IntegrationOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  double initial_step = 1e-3;
};

class RadialSolution {
 public:
  RadialSolution(SolitonProfile profile, double sigma0, std::vector<RadialSample> samples,
                 double s_min, double s_max, bool clipped_low, bool clipped_high);

  const SolitonProfile& profile() const { return profile_; }
  double sigma0() const { return sigma0_; }
  const std::vector<RadialSample>& samples() const { return samples_; }
  std::vector<RadialSample>& mutable_samples() { return samples_; }
  /// Requested window; samples may stop short of it when clipped.
  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  bool clipped_low() const { return clipped_low_; }
  bool clipped_high() const { return clipped_high_; }
  bool has_potential() const { return has_potential_; }
  void mark_potential() { has_potential_ = true; }

  double s_front() const { return samples_.front().s; }
  double s_back() const { return samples_.back().s; }

  /// sigma(s) by quintic Hermite interpolation (sigma' = phi, sigma'' = phi' phi).
  double sigma_at(double s) const;
  /// P(s) by quintic Hermite interpolation (P' = sigma, P'' = phi). Needs reconstruct_F.
  double potential_at(double s) const;

 private:
  std::size_t interval(double s) const;

  SolitonProfile profile_;
  double sigma0_;
  std::vector<RadialSample> samples_;
  double s_min_, s_max_;
  bool clipped_low_, clipped_high_;
  bool has_potential_ = false;
};

/// Default normalization sigma(0): a + 1, or 1 when a = 0.
double default_sigma0(const SolitonProfile& pr);

/// n uniformly spaced samples on [s_min, s_max] (s_min <= 0 <= s_max) of the
/// solution of d sigma/ds = phi(sigma), sigma(0) = sigma0. Samples stop where
/// sigma would leave (a, b); a collapsing step size throws NonConvergence.
RadialSolution integrate_sigma(const SolitonProfile& pr, double sigma0, double s_min, double s_max,
                               int n, const IntegrationOptions& opt = {});

/// Fills F (F(0) = 0), potential = s + F and the ODE residual column.
RadialSolution reconstruct_F(RadialSolution sol);

/// integrate_sigma followed by reconstruct_F.
RadialSolution solve_radial(const SolitonProfile& pr, double sigma0, double s_min, double s_max, int n,
                            const IntegrationOptions& opt = {});

/// Vanishing order of phi at the left endpoint a (log-log slope of |phi(a + tau)|
/// over tau in [1e-8, 1e-2]); 0 if phi(a) != 0.
double vanishing_order_left(const SolitonProfile& pr);
/// Same at a finite right endpoint b (tau = b - sigma).
double vanishing_order_right(const SolitonProfile& pr);
/// Log-log slope of |phi| over sigma in [1e3, 1e5]; +inf for exponential growth.
double growth_exponent_numeric(const SolitonProfile& pr);
/// Exponent of the dominant term of the closed form as sigma -> infinity.
double growth_exponent_analytic(const SolitonProfile& pr);

/// int_{tau_from}^{tau_to} d tau / sqrt(phi(a + tau)); +inf when an endpoint is at
/// infinite distance. tau_to may be +inf.
double geodesic_length(const SolitonProfile& pr, double tau_from, double tau_to);

struct AsymptoticEstimate {
  double value;
  double error_estimate;  // relative
  int points;
};

/// lim sigma(s) e^{-2s/|mu|} as s -> +inf: E(0)/B(0) for mu < 0, D(0) for mu > 0.
/// Polynomial (Neville) extrapolation in x = e^{-2s/|mu|} over the last tenth of the
/// samples. Throws NonConvergence if the error estimate exceeds max_rel_error.
AsymptoticEstimate asymptotic_coefficient(const RadialSolution& sol, double mu,
                                          double max_rel_error = 1e-6);

/// Direct integration in sigma of phi' = (mu - m/sigma) phi + kappa + 2 lambda sigma
/// from (sigma_start, phi_start), relative tolerance 1e-12. Independent of the closed form.
double oracle_integrate_linear(int m, double kappa, int lambda, double mu, double sigma_start,
                               double phi_start, double sigma_end);
/// Same, reporting phi at every point of sigma_out (monotone in the direction of travel).
std::vector<double> oracle_integrate_linear(int m, double kappa, int lambda, double mu,
                                            double sigma_start, double phi_start,
                                            std::span<const double> sigma_out);

/// CSV with header s,sigma,phi,F,potential,length,residual; 17 significant digits.
std::string radial_csv(const RadialSolution& sol);

}  // namespace calabi

#pragma once

// Coordinate check on C^2 \ {0} (cone over the round S^3, m = 1, kappa = 4): a
// U(2)-invariant Kahler potential P(u), u = |z|^2, has
//   det g = P_u (P_u + u P_uu) = P_s P_ss/(8 u^2),   s = log(u)/2,
// and the soliton equation rho + 2 lambda omega = -i ddbar(mu sigma) holds iff
//   Psi = -log det g + 2 lambda P + mu sigma,   sigma = P_s,
// is constant.

#include <functional>
#include <vector>

#include "calabi/radial.hpp"

namespace calabi {

class RadialMetricModel {
 public:
  /// potential[i] = P(s_min + i h).
  RadialMetricModel(std::vector<double> potential, double s_min, double h, int lambda, double mu);

  static RadialMetricModel from_solution(const RadialSolution& sol, int lambda, double mu);
  static RadialMetricModel from_function(const std::function<double(double)>& potential_of_s, double s_min,
                                         double s_max, int n, int lambda, double mu);

  static constexpr int m = 1;
  static constexpr double kappa = 4.0;

  const std::vector<double>& potential() const { return potential_; }
  double s_min() const { return s_min_; }
  double step() const { return h_; }
  std::size_t size() const { return potential_.size(); }
  double u_min() const;
  double u_max() const;
  int lambda() const { return lambda_; }
  double mu() const { return mu_; }
  RadialMetricModel with_mu(double mu) const;

 private:
  std::vector<double> potential_;
  double s_min_, h_;
  int lambda_;
  double mu_;
};

/// det g at a grid node u (second-order differences in s). Throws InvalidParameter
/// when u is not an interior node or the metric is not positive there.
double metric_determinant(const RadialMetricModel& model, double u);

struct NodeValues {
  std::vector<double> u;
  std::vector<double> sigma;  // P_s
  std::vector<double> det;
  std::vector<double> psi;
};

/// Values at every stride-th node, edges excluded (3 nodes of the strided grid
/// on each side).
NodeValues node_values(const RadialMetricModel& model, int stride = 1);

struct IdentityResidual {
  double max_residual;               // after Richardson extrapolation of Psi in h^2
  std::vector<double> raw_residual;  // plain second-order values at steps 8h, 4h, 2h, h
  double order_estimate;             // log2 of the ratio of the last two raw values
};

/// Deviation of Psi from its mean, max over the interior nodes of the stride-8 grid.
IdentityResidual soliton_identity_residual(const RadialMetricModel& model);

}  // namespace calabi

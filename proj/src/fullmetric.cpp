#include "calabi/fullmetric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calabi/error.hpp"

namespace calabi {
namespace {

constexpr int kEdge = 3;

struct Derivs {
  double d1, d2;
};

Derivs central(const std::vector<double>& p, std::size_t i, int stride, double h) {
  const double hs = h * stride;
  const double lo = p[i - static_cast<std::size_t>(stride)];
  const double hi = p[i + static_cast<std::size_t>(stride)];
  return {(hi - lo) / (2.0 * hs), (hi - 2.0 * p[i] + lo) / (hs * hs)};
}

double determinant(const Derivs& d, double u) {
  if (!(d.d1 > 0.0) || !(d.d2 > 0.0)) {
    throw InvalidParameter("metric is not positive at u = " + std::to_string(u));
  }
  return d.d1 * d.d2 / (8.0 * u * u);
}

}  // namespace

RadialMetricModel::RadialMetricModel(std::vector<double> potential, double s_min, double h, int lambda, double mu)
    : potential_(std::move(potential)), s_min_(s_min), h_(h), lambda_(lambda), mu_(mu) {
  require(potential_.size() >= 2 * kEdge * 4 + 3, "metric model needs a longer grid");
  require(h > 0.0, "grid step must be positive");
  require(lambda >= -1 && lambda <= 1, "lambda must be -1, 0 or +1");
}

RadialMetricModel RadialMetricModel::from_solution(const RadialSolution& sol, int lambda, double mu) {
  require(sol.has_potential(), "metric model needs the reconstructed potential");
  const auto& smp = sol.samples();
  require(smp.size() >= 3, "metric model needs samples");
  const double h = smp[1].s - smp[0].s;
  std::vector<double> p;
  p.reserve(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    require(std::abs(smp[i].s - (smp[0].s + i * h)) <= 1e-9 * (1.0 + std::abs(smp[i].s)),
            "metric model needs a uniform s grid");
    p.push_back(smp[i].potential);
  }
  return RadialMetricModel(std::move(p), smp[0].s, h, lambda, mu);
}

RadialMetricModel RadialMetricModel::from_function(const std::function<double(double)>& potential_of_s,
                                                   double s_min, double s_max, int n, int lambda, double mu) {
  require(n >= 3 && s_max > s_min, "metric model needs n >= 3 and s_max > s_min");
  const double h = (s_max - s_min) / (n - 1);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = potential_of_s(s_min + i * h);
  return RadialMetricModel(std::move(p), s_min, h, lambda, mu);
}

double RadialMetricModel::u_min() const { return std::exp(2.0 * s_min_); }
double RadialMetricModel::u_max() const {
  return std::exp(2.0 * (s_min_ + h_ * static_cast<double>(potential_.size() - 1)));
}

RadialMetricModel RadialMetricModel::with_mu(double mu) const {
  RadialMetricModel copy = *this;
  copy.mu_ = mu;
  return copy;
}

double metric_determinant(const RadialMetricModel& model, double u) {
  require(u > 0.0, "metric_determinant needs u > 0");
  const double s = 0.5 * std::log(u);
  const double x = (s - model.s_min()) / model.step();
  const double idx = std::round(x);
  require(std::abs(x - idx) <= 1e-6, "u = " + std::to_string(u) + " is not a grid node");
  require(idx >= 1.0 && idx + 1.0 < static_cast<double>(model.size()), "u lies on the grid edge");
  return determinant(central(model.potential(), static_cast<std::size_t>(idx), 1, model.step()), u);
}

NodeValues node_values(const RadialMetricModel& model, int stride) {
  require(stride >= 1, "stride must be positive");
  const std::size_t n = model.size();
  const std::size_t st = static_cast<std::size_t>(stride);
  const std::size_t first = kEdge * st;
  NodeValues out;
  for (std::size_t i = first; i + first < n; i += st) {
    const double s = model.s_min() + model.step() * static_cast<double>(i);
    const double u = std::exp(2.0 * s);
    const Derivs d = central(model.potential(), i, stride, model.step());
    const double det = determinant(d, u);
    out.u.push_back(u);
    out.sigma.push_back(d.d1);
    out.det.push_back(det);
    out.psi.push_back(-std::log(det) + 2.0 * model.lambda() * model.potential()[i] + model.mu() * d.d1);
  }
  return out;
}

namespace {

double deviation(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - mean));
  return worst;
}

constexpr int kCoarsest = 8;

// Values of the stride-st grid restricted to the nodes of the coarsest grid.
std::vector<double> on_coarse_nodes(const RadialMetricModel& model, int stride) {
  const NodeValues nv = node_values(model, stride);
  const std::size_t n = model.size();
  const std::size_t first_coarse = kEdge * kCoarsest;
  const std::size_t first = kEdge * static_cast<std::size_t>(stride);
  std::vector<double> out;
  for (std::size_t i = first_coarse; i + first_coarse < n; i += kCoarsest) {
    out.push_back(nv.psi[(i - first) / static_cast<std::size_t>(stride)]);
  }
  return out;
}

}  // namespace

IdentityResidual soliton_identity_residual(const RadialMetricModel& model) {
  require(model.size() > static_cast<std::size_t>(4 * kEdge * kCoarsest), "grid too short for the identity check");
  // Richardson table in h^2: strides 8, 4, 2, 1.
  std::vector<std::vector<double>> table;
  IdentityResidual out{};
  for (int stride = kCoarsest; stride >= 1; stride /= 2) {
    table.push_back(on_coarse_nodes(model, stride));
    out.raw_residual.push_back(deviation(table.back()));
  }
  for (std::size_t level = 1; level < table.size(); ++level) {
    const double f = std::pow(4.0, static_cast<double>(level));
    for (std::size_t j = table.size() - 1; j >= level; --j) {
      for (std::size_t i = 0; i < table[j].size(); ++i) table[j][i] = (f * table[j][i] - table[j - 1][i]) / (f - 1.0);
    }
  }
  out.max_residual = deviation(table.back());
  const std::size_t k = out.raw_residual.size();
  out.order_estimate = std::log2(out.raw_residual[k - 2] / out.raw_residual[k - 1]);
  return out;
}

}  // namespace calabi

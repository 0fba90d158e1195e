#include "calabi/classifier.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "calabi/error.hpp"
#include "calabi/radial.hpp"

namespace calabi {
namespace {

constexpr double kZeroTol = 1e-10;

double fd_slope(const SolitonProfile& pr, double s0) {
  const auto& c = pr.coefficients();
  auto f = [&c](double s) { return kernels::scalar::phi_one(c, s); };
  return central_difference8(f, s0, s0 / 64.0);
}

template <class F>
double bisect_root(F&& f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

double zero_tol(const SolitonProfile& pr) { return kZeroTol * (1.0 + std::abs(pr.kappa())); }

}  // namespace

std::vector<ZeroPoint> zero_structure(const SolitonProfile& pr, double sigma_max) {
  require(sigma_max > pr.a(), "zero_structure needs sigma_max > a");
  const double lo = 1e-6;
  const int per_decade = 200;
  const int n = std::max(16, static_cast<int>(std::ceil(std::log10(sigma_max / lo) * per_decade)) + 1);
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo * std::pow(sigma_max / lo, double(i) / (n - 1));
  grid.back() = sigma_max;
  const std::vector<double> vals = pr.phi_batch(grid);

  const auto& c = pr.coefficients();
  auto phi = [&c](double s) { return kernels::scalar::phi_one(c, s); };
  auto dphi = [&pr](double s) { return pr.phi_prime(s); };

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double f0 = vals[i], f1 = vals[i + 1];
    if (!std::isfinite(f0) || !std::isfinite(f1)) continue;
    if (f0 == 0.0) {
      roots.push_back(grid[i]);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      roots.push_back(bisect_root(phi, grid[i], grid[i + 1]));
    }
  }
  if (vals.back() == 0.0) roots.push_back(grid.back());

  std::vector<double> touching;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double a0 = std::abs(vals[i - 1]), a1 = std::abs(vals[i]), a2 = std::abs(vals[i + 1]);
    if (!(a1 <= a0 && a1 <= a2)) continue;
    if ((vals[i - 1] < 0.0) != (vals[i + 1] < 0.0)) continue;
    const double d0 = dphi(grid[i - 1]), d2 = dphi(grid[i + 1]);
    if ((d0 < 0.0) == (d2 < 0.0)) continue;
    const double s = bisect_root(dphi, grid[i - 1], grid[i + 1]);
    if (std::abs(phi(s)) <= zero_tol(pr)) touching.push_back(s);
  }
  // The anchored endpoint carries its exact location.
  if (pr.a() > 0.0 && pr.anchored_at_left()) {
    const double d = pr.phi_prime(pr.a());
    (std::abs(d) <= 1e-8 ? touching : roots).push_back(pr.a());
  }

  std::vector<ZeroPoint> out;
  auto add = [&](double s, bool touch) {
    for (auto& z : out) {
      if (std::abs(z.sigma - s) <= 1e-9 * std::max(1.0, s)) {
        if (s == pr.a()) z.sigma = s;
        z.touching = z.touching || touch;
        return;
      }
    }
    out.push_back({s, zero_slope(pr.kappa(), pr.lambda(), s), fd_slope(pr, s), touch});
  };
  for (double s : touching) add(s, true);
  for (double s : roots) add(s, false);
  for (auto& z : out) {
    z.slope = zero_slope(pr.kappa(), pr.lambda(), z.sigma);
    z.fd_slope = fd_slope(pr, z.sigma);
  }
  std::sort(out.begin(), out.end(), [](const ZeroPoint& x, const ZeroPoint& y) { return x.sigma < y.sigma; });
  return out;
}

bool zero_bounds_hold(const SolitonProfile& pr, const std::vector<ZeroPoint>& zeros) {
  if (pr.lambda() == 1) return zeros.empty() || (zeros.size() == 1 && zeros.front().sigma < 1.0);
  if (pr.lambda() == -1) {
    const double half = pr.kappa() / 2.0;
    const double tol = 1e-9 * std::max(1.0, half);
    if (zeros.size() > 2) return false;
    if (zeros.size() == 2) return zeros[0].sigma <= half + tol && zeros[1].sigma >= half - tol;
    return true;
  }
  return true;
}

std::string endpoint_name(Endpoint e) { return e == Endpoint::left_a ? "left_a" : "right_b"; }

std::string end_kind_name(EndKind k) {
  switch (k) {
    case EndKind::complete_end: return "complete_end";
    case EndKind::smooth_zero_section: return "smooth_zero_section";
    case EndKind::finite_distance_singular: return "finite_distance_singular";
    case EndKind::unbounded_complete: return "unbounded_complete";
  }
  return "unknown";
}

EndKind end_kind_from_name(const std::string& s) {
  for (EndKind k : {EndKind::complete_end, EndKind::smooth_zero_section, EndKind::finite_distance_singular,
                    EndKind::unbounded_complete}) {
    if (end_kind_name(k) == s) return k;
  }
  throw InvalidParameter("unknown endpoint kind '" + s + "'");
}

namespace {

bool left_vanishes(const SolitonProfile& pr) {
  return pr.a() > 0.0 ? pr.anchored_at_left() : pr.coefficients().nu_offset == 0.0;
}

void reject_interior_zero(const SolitonProfile& pr) {
  const double hi = std::isfinite(pr.b()) ? pr.b() : std::max(1e6, 10.0 * pr.a());
  for (const auto& z : zero_structure(pr, hi)) {
    const double tol = 1e-9 * std::max(1.0, z.sigma);
    if (z.sigma > pr.a() + tol && z.sigma < pr.b() - tol) {
      throw InvalidParameter("profile has an interior zero at sigma = " + std::to_string(z.sigma));
    }
  }
  // phi must be positive inside (a, b).
  const double probe = std::isfinite(pr.b()) ? 0.5 * (pr.a() + pr.b()) : default_sigma0(pr);
  require(pr.phi(probe) > 0.0, "profile is not positive on (a, b)");
}

EndpointVerdict left_verdict(const SolitonProfile& pr) {
  const double s0 = std::isfinite(pr.b()) ? 0.5 * (pr.a() + pr.b()) : default_sigma0(pr);
  EndpointVerdict v{Endpoint::left_a, EndKind::finite_distance_singular, 0.0,
                    std::numeric_limits<double>::quiet_NaN(), 0.0};
  if (left_vanishes(pr)) {
    v.vanishing_order = vanishing_order_left(pr);
    v.slope = pr.a() > 0.0 ? pr.phi_prime(pr.a()) : pr.kappa() / (pr.m() + 1);
    if (v.vanishing_order >= 2.0 - 1e-2) v.kind = EndKind::complete_end;
  } else if (pr.a() > 0.0) {
    v.slope = pr.phi_prime(pr.a());
  }
  v.distance = geodesic_length(pr, 0.0, s0 - pr.a());
  return v;
}

EndpointVerdict right_verdict(const SolitonProfile& pr) {
  EndpointVerdict v{Endpoint::right_b, EndKind::finite_distance_singular, 0.0,
                    std::numeric_limits<double>::quiet_NaN(), 0.0};
  if (std::isinf(pr.b())) {
    const double s0 = default_sigma0(pr);
    v.vanishing_order = growth_exponent_analytic(pr);
    if (v.vanishing_order <= 2.0 + 1e-2) v.kind = EndKind::unbounded_complete;
    v.distance = geodesic_length(pr, s0 - pr.a(), kInfinity);
  } else {
    const double s0 = 0.5 * (pr.a() + pr.b());
    v.vanishing_order = vanishing_order_right(pr);
    v.slope = zero_slope(pr.kappa(), pr.lambda(), pr.b());
    if (v.vanishing_order >= 2.0 - 1e-2) v.kind = EndKind::complete_end;
    v.distance = geodesic_length(pr, s0 - pr.a(), pr.b() - pr.a());
  }
  return v;
}

bool smooth_extension(const SolitonProfile& pr) {
  if (pr.a() <= 0.0) return false;
  if (std::abs(pr.phi(pr.a())) > kZeroTol) return false;
  if (std::abs(pr.phi_prime(pr.a()) - 2.0) > 1e-8) return false;
  return std::isinf(pr.b()) && growth_exponent_analytic(pr) <= 2.0 + 1e-2;
}

}  // namespace

std::pair<EndpointVerdict, EndpointVerdict> completeness_report(const SolitonProfile& pr) {
  reject_interior_zero(pr);
  EndpointVerdict left = left_verdict(pr);
  if (smooth_extension(pr)) left.kind = EndKind::smooth_zero_section;
  return {left, right_verdict(pr)};
}

EndpointVerdict extension_check(const SolitonProfile& pr) {
  EndpointVerdict left = left_verdict(pr);
  if (smooth_extension(pr)) left.kind = EndKind::smooth_zero_section;
  return left;
}

BundleAdmissibility bundle_admissibility(int p, int k, int lambda) {
  require(p >= 1 && k >= 1, "bundle data needs p, k >= 1");
  if (lambda == 0) throw InvalidParameter("no extension statement exists for steady solitons (lambda = 0)");
  require(lambda == 1 || lambda == -1, "lambda must be -1 or +1");
  const double a = lambda * (1.0 - static_cast<double>(p) / k);
  const bool admissible = (lambda == -1 && k < p) || (lambda == 1 && k > p);
  return {p, k, lambda, a, admissible};
}

}  // namespace calabi

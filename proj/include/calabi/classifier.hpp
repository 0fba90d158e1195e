#pragma once

// Endpoint classification of profiles: completeness at finite endpoints from the
// vanishing order of phi, at infinity from its growth, and smooth extension onto a
// zero section (phi(a) = 0, phi'(a) = 2, at most quadratic growth).

#include <string>
#include <utility>
#include <vector>

#include "calabi/profile.hpp"

namespace calabi {

struct ZeroPoint {
  double sigma;
  double slope;     // kappa + 2 lambda sigma
  double fd_slope;  // finite-difference estimate of phi'
  bool touching;    // no sign change (double zero)
};

/// Zeros of phi on (0, sigma_max]: log-grid sign scan, bisection, plus touching
/// zeros found as minima of |phi|.
std::vector<ZeroPoint> zero_structure(const SolitonProfile& pr, double sigma_max);

/// For lambda = 1: at most one positive zero and it lies in (0, 1). For lambda = -1:
/// at most two, one in (0, kappa/2] and one in [kappa/2, inf). Always true for lambda = 0.
bool zero_bounds_hold(const SolitonProfile& pr, const std::vector<ZeroPoint>& zeros);

enum class Endpoint { left_a, right_b };
enum class EndKind { complete_end, smooth_zero_section, finite_distance_singular, unbounded_complete };

std::string endpoint_name(Endpoint e);
std::string end_kind_name(EndKind k);
EndKind end_kind_from_name(const std::string& s);

struct EndpointVerdict {
  Endpoint endpoint;
  EndKind kind;
  double vanishing_order;  // growth exponent for the right end at infinity
  double slope;            // phi' at a finite endpoint, NaN at infinity
  double distance;         // geodesic distance from sigma0 to the endpoint
};

/// Verdicts at a and b. Throws InvalidParameter if phi has a zero strictly inside (a, b).
std::pair<EndpointVerdict, EndpointVerdict> completeness_report(const SolitonProfile& pr);

/// Left-endpoint verdict: smooth_zero_section iff a > 0, |phi(a)| <= 1e-10,
/// |phi'(a) - 2| <= 1e-8 and growth at infinity <= 2.
EndpointVerdict extension_check(const SolitonProfile& pr);

struct BundleAdmissibility {
  int p;
  int k;
  int lambda;
  double a_required;
  bool admissible;
};

/// a = lambda (1 - p/k); admissible iff (lambda = -1 and k < p) or (lambda = 1 and k > p).
BundleAdmissibility bundle_admissibility(int p, int k, int lambda);

}  // namespace calabi

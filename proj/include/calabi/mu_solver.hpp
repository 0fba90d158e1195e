#pragma once

#include <vector>

namespace calabi {

// Shrinking bundle solitons (lambda = -1, nu = 0) close up at sigma = a iff mu
// is a positive root of
//
//   f(a, mu) = (m+1)!/(a^m mu^{m+2}) sum_{j=0}^{m+1} c_j mu^j,
//   c_j = (2a - kappa j/(m+1)) a^{j-1}/j!.
//
// For 0 < a < kappa/2 the c_j change sign exactly once, so by Descartes' rule
// there is exactly one positive root, and it lies above 2(m+1)/kappa.

struct MuRootCertificate {
  double root;
  double lower_bracket;  // 2(m+1)/kappa
  int sign_changes;
  double residual;        // |f(a, root)|
  double residual_scale;  // (m+1)!/(a^m mu^{m+2}) sum |c_j| mu^j at the root
  double excess;          // root - lower_bracket, to full relative precision
};

/// Polynomial coefficients c_0..c_{m+1} of f, in increasing powers of mu.
std::vector<double> mu_polynomial(int m, double kappa, double a);

double f_eval(int m, double kappa, double a, double mu);

/// Signs (-1, 0, +1) of c_0..c_{m+1}.
std::vector<int> coefficient_signs(int m, double kappa, double a);

/// Descartes count: sign changes in a sequence, zeros skipped.
int count_sign_changes(const std::vector<int>& signs);

MuRootCertificate solve_mu(int m, double kappa, double a);

/// Number of sign changes of f(a, .) on a log grid over [lo, hi]; used to
/// confirm no second positive root exists in the scanned range.
int scan_root_count(int m, double kappa, double a, double lo, double hi, int points = 400);

}  // namespace calabi

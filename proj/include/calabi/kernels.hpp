#pragma once

// Evaluation kernels for the soliton profile phi(sigma) over batches of sigma.
//
// A scalar reference implementation and, on x86-64, an AVX2/FMA variant are
// built; the variant is picked at runtime from CPUID. Both evaluate the same
// two-branch formula:
//
//   |mu sigma| <  1 : (nu - nu0) e^{mu sigma} sigma^{-m} + kappa sigma/(m+1)
//                     + K sum_{j>=2} (m+1)! mu^{j-2} sigma^j / (j+m)!
//   |mu sigma| >= 1 : nu e^{mu sigma} sigma^{-m} - 2 lambda sigma/mu
//                     - nu0 sigma^{-m} sum_{j=0}^{m} (mu sigma)^j / j!
//
// with K = 2 lambda + kappa mu/(m+1) and nu0 = (m+1)! K / mu^{m+2}. The first
// branch is the entire-series form, free of the cancellation between the
// exponential and its Taylor polynomial near sigma = 0.

#include <array>
#include <limits>
#include <span>
#include <string_view>

namespace calabi::kernels {

inline constexpr int kSeriesTerms = 26;

struct ProfileCoefficients {
  int m = 1;
  double kappa = 0.0;
  double lambda = 0.0;
  double mu = 1.0;
  double nu = 0.0;
  double nu_offset = 0.0;  // nu - nu0, kept separately for accuracy
  double nu0 = 0.0;
  double bracket = 0.0;   // K = 2 lambda + kappa mu/(m+1)
  double linear = 0.0;    // kappa/(m+1)
  double drift = 0.0;     // -2 lambda/mu
  // Taylor coefficients 1/j!, j = 0..m (Horner order reversed at use).
  std::array<double, 21> inv_fact{};
  // Series ratios: term_{j+1} = term_j * mu sigma / (j + m + 1).
  std::array<double, kSeriesTerms> series_ratio{};
  double series_lead = 0.0;  // K/(m+2)
};

/// bracket overrides K when finite (callers that know K more accurately than
/// 2 lambda + kappa mu/(m+1) evaluated in double).
ProfileCoefficients make_coefficients(int m, double kappa, double lambda, double mu, double nu,
                                      double nu_offset, double bracket = std::numeric_limits<double>::quiet_NaN());

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Best variant supported by this CPU and build.
Isa detected_isa();
/// Variant used by phi_batch; defaults to detected_isa(). CALABI_FORCE_SCALAR=1 in the
/// environment pins the scalar path.
Isa active_isa();
/// Overrides the active variant (tests). Requesting an unsupported variant throws.
void set_active_isa(Isa isa);

namespace scalar {
double phi_one(const ProfileCoefficients& c, double sigma);
void phi_batch(const ProfileCoefficients& c, std::span<const double> sigma, std::span<double> out);
}  // namespace scalar

namespace avx2 {
bool available();
void phi_batch(const ProfileCoefficients& c, std::span<const double> sigma, std::span<double> out);
/// Vector exp used by the AVX2 path, exposed for accuracy tests.
void exp_batch(std::span<const double> x, std::span<double> out);
}  // namespace avx2

/// Dispatches to the active variant. out.size() must equal sigma.size().
void phi_batch(const ProfileCoefficients& c, std::span<const double> sigma, std::span<double> out);

}  // namespace calabi::kernels

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "calabi/kernels.hpp"
#include "calabi/profile.hpp"

using namespace calabi;

namespace {

std::vector<double> sample_sigmas(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> U(-4.0, 3.0);
  std::vector<double> s(n);
  for (auto& v : s) v = std::pow(10.0, U(rng));
  return s;
}

// Magnitude of the largest term either branch adds up; rounding differences between
// the variants are relative to this, not to the (possibly cancelled) result.
double term_scale(const kernels::ProfileCoefficients& c, double s) {
  const double x = c.mu * s;
  const double sm = std::pow(s, -c.m);
  double poly = 0.0, t = 1.0;
  for (int j = 0; j <= c.m; ++j) {
    poly += t;
    t *= std::abs(x) / (j + 1);
  }
  return std::abs(c.linear * s) + std::abs(c.drift * s) + (std::abs(c.nu) + std::abs(c.nu_offset)) * std::exp(x) * sm +
         std::abs(c.nu0) * sm * poly + std::abs(c.series_lead) * s * s * std::exp(std::abs(x));
}

}  // namespace

TEST_CASE("isa names and override") {
  CHECK(kernels::isa_name(kernels::Isa::scalar) == "scalar");
  CHECK(kernels::isa_name(kernels::Isa::avx2) == "avx2");
  const kernels::Isa before = kernels::active_isa();
  kernels::set_active_isa(kernels::Isa::scalar);
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  if (!kernels::avx2::available()) {
    CHECK_THROWS(kernels::set_active_isa(kernels::Isa::avx2));
  }
  kernels::set_active_isa(before);
}

TEST_CASE("scalar batch equals phi_one") {
  const SolitonProfile pr = SolitonProfile::anchored(3, 2.5, -1, -1.7, 0.4);
  std::mt19937_64 rng(1);
  const auto s = sample_sigmas(rng, 257);
  std::vector<double> out(s.size());
  kernels::scalar::phi_batch(pr.coefficients(), s, out);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(out[i] == kernels::scalar::phi_one(pr.coefficients(), s[i]));
}

TEST_CASE("avx2 kernel matches scalar reference") {
  if (!kernels::avx2::available()) {
    MESSAGE("AVX2 not available on this machine; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const int m = 1 + static_cast<int>(rng() % 6);
    const int lambda = static_cast<int>(rng() % 3) - 1;
    const double kappa = -8.0 + 16.0 * U(rng);
    const double mu = -(0.05 + 5.0 * U(rng));
    const double a = U(rng) < 0.3 ? 0.0 : 2.0 * U(rng);
    const SolitonProfile pr = SolitonProfile::anchored(m, kappa, lambda, mu, a);
    // Sizes that exercise the 4-wide body and every tail length.
    const auto s = sample_sigmas(rng, 37 + static_cast<std::size_t>(c % 4));
    std::vector<double> ref(s.size()), vec(s.size());
    kernels::scalar::phi_batch(pr.coefficients(), s, ref);
    kernels::avx2::phi_batch(pr.coefficients(), s, vec);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double scale = term_scale(pr.coefficients(), s[i]) + 1e-300;
      worst = std::max(worst, std::abs(vec[i] - ref[i]) / scale);
    }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("avx2 exp is accurate") {
  if (!kernels::avx2::available()) return;
  std::vector<double> x, out;
  for (int i = -7000; i <= 7000; ++i) x.push_back(i * 0.1);
  out.resize(x.size());
  kernels::avx2::exp_batch(x, out);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(out[i] / std::exp(x[i]) - 1.0));
  CHECK(worst <= 4e-16);
}

TEST_CASE("dispatch uses the active variant") {
  const SolitonProfile pr = SolitonProfile::cone(2, 6.0, 1, -0.8);
  std::mt19937_64 rng(3);
  const auto s = sample_sigmas(rng, 101);
  std::vector<double> a(s.size()), b(s.size());
  const kernels::Isa before = kernels::active_isa();
  kernels::set_active_isa(kernels::Isa::scalar);
  kernels::phi_batch(pr.coefficients(), s, a);
  kernels::set_active_isa(kernels::detected_isa());
  kernels::phi_batch(pr.coefficients(), s, b);
  kernels::set_active_isa(before);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-13));
  std::vector<double> short_out(3);
  CHECK_THROWS(kernels::phi_batch(pr.coefficients(), s, short_out));
}

// AVX2/FMA variant of the profile kernel. Compiled with -mavx2 -mfma and only
// called after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "calabi/error.hpp"
#include "calabi/kernels.hpp"

namespace calabi::kernels::avx2 {
namespace {

// exp(x) by Cody-Waite reduction x = n ln2 + r, |r| <= ln2/2, and a degree-13
// Taylor polynomial in r. Lanes below -708.39 flush to zero (the scalar path
// returns subnormals there); lanes above 709.78 give +inf.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d hi_limit = _mm256_set1_pd(709.782712893384);
  const __m256d lo_limit = _mm256_set1_pd(-708.3964185322641);

  const __m256d xc = _mm256_max_pd(_mm256_min_pd(x, hi_limit), lo_limit);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double kInvFact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
      1.0,                1.0};
  __m256d p = _mm256_set1_pd(kInvFact[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[i]));

  // 2^n assembled in two halves so n = 1024 (x near the upper limit) stays representable.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m128i half = _mm_srai_epi32(n32, 1);
  const __m128i rest = _mm_sub_epi32(n32, half);
  auto pow2 = [](__m128i e) {
    const __m256i e64 = _mm256_cvtepi32_epi64(_mm_add_epi32(e, _mm_set1_epi32(1023)));
    return _mm256_castsi256_pd(_mm256_slli_epi64(e64, 52));
  };
  __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, pow2(half)), pow2(rest));

  const __m256d overflow = _mm256_cmp_pd(x, hi_limit, _CMP_GT_OQ);
  const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  result = _mm256_blendv_pd(result, _mm256_set1_pd(HUGE_VAL), overflow);
  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), underflow);
  return result;
}

inline __m256d inv_pow(__m256d sigma, int m) {
  __m256d r = _mm256_set1_pd(1.0);
  for (int i = 0; i < m; ++i) r = _mm256_mul_pd(r, sigma);
  return _mm256_div_pd(_mm256_set1_pd(1.0), r);
}

inline __m256d phi_pd(const ProfileCoefficients& c, __m256d sigma) {
  const __m256d x = _mm256_mul_pd(_mm256_set1_pd(c.mu), sigma);
  const __m256d inv_sm = inv_pow(sigma, c.m);
  const __m256d ex = exp_pd(x);

  // Entire-series branch.
  __m256d term = _mm256_mul_pd(_mm256_set1_pd(c.series_lead), _mm256_mul_pd(sigma, sigma));
  __m256d sum = term;
  for (int j = 0; j < kSeriesTerms - 1; ++j) {
    term = _mm256_mul_pd(term, _mm256_mul_pd(x, _mm256_set1_pd(c.series_ratio[static_cast<std::size_t>(j)])));
    sum = _mm256_add_pd(sum, term);
  }
  __m256d near = _mm256_fmadd_pd(_mm256_set1_pd(c.linear), sigma, sum);
  near = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_set1_pd(c.nu_offset), ex), inv_sm, near);

  // Closed-form branch.
  __m256d poly = _mm256_set1_pd(c.inv_fact[static_cast<std::size_t>(c.m)]);
  for (int j = c.m - 1; j >= 0; --j) {
    poly = _mm256_fmadd_pd(poly, x, _mm256_set1_pd(c.inv_fact[static_cast<std::size_t>(j)]));
  }
  __m256d far = _mm256_mul_pd(_mm256_set1_pd(c.drift), sigma);
  far = _mm256_fnmadd_pd(_mm256_mul_pd(_mm256_set1_pd(c.nu0), inv_sm), poly, far);
  if (c.nu != 0.0) far = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_set1_pd(c.nu), ex), inv_sm, far);

  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d small = _mm256_cmp_pd(_mm256_and_pd(x, abs_mask), _mm256_set1_pd(1.0), _CMP_LT_OQ);
  return _mm256_blendv_pd(far, near, small);
}

}  // namespace

bool available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

void phi_batch(const ProfileCoefficients& c, std::span<const double> sigma, std::span<double> out) {
  require(sigma.size() == out.size(), "phi_batch: size mismatch");
  const std::size_t n = sigma.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, phi_pd(c, _mm256_loadu_pd(sigma.data() + i)));
  }
  if (i < n) {
    alignas(32) double in_tail[4] = {1.0, 1.0, 1.0, 1.0};
    alignas(32) double out_tail[4];
    for (std::size_t k = 0; i + k < n; ++k) in_tail[k] = sigma[i + k];
    _mm256_store_pd(out_tail, phi_pd(c, _mm256_load_pd(in_tail)));
    for (std::size_t k = 0; i + k < n; ++k) out[i + k] = out_tail[k];
  }
}

void exp_batch(std::span<const double> x, std::span<double> out) {
  require(x.size() == out.size(), "exp_batch: size mismatch");
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) _mm256_storeu_pd(out.data() + i, exp_pd(_mm256_loadu_pd(x.data() + i)));
  for (; i < x.size(); ++i) {
    alignas(32) double t[4] = {x[i], 0, 0, 0};
    _mm256_store_pd(t, exp_pd(_mm256_load_pd(t)));
    out[i] = t[0];
  }
}

}  // namespace calabi::kernels::avx2

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace calabi {

inline constexpr int kMaxDimension = 19;  // (m+1)! = 20! is the largest factorial exact in uint64

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

constexpr std::uint64_t factorial_u64(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

inline double factorial(int n) { return static_cast<double>(factorial_u64(n)); }

inline double ipow(double x, int n) {
  double r = 1.0;
  bool neg = n < 0;
  unsigned e = static_cast<unsigned>(neg ? -n : n);
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return neg ? 1.0 / r : r;
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace calabi

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "calabi/error.hpp"
#include "calabi/kernels.hpp"

namespace calabi::kernels {

#ifndef CALABI_WITH_AVX2
namespace avx2 {
bool available() { return false; }
void phi_batch(const ProfileCoefficients&, std::span<const double>, std::span<double>) {
  throw InvalidParameter("AVX2 kernels were not built");
}
void exp_batch(std::span<const double>, std::span<double>) {
  throw InvalidParameter("AVX2 kernels were not built");
}
}  // namespace avx2
#endif

namespace {

Isa initial_isa() {
  const char* force = std::getenv("CALABI_FORCE_SCALAR");
  if (force != nullptr && std::strcmp(force, "0") != 0 && force[0] != '\0') return Isa::scalar;
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return avx2::available() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) throw InvalidParameter("AVX2 not supported here");
  active().store(isa, std::memory_order_relaxed);
}

void phi_batch(const ProfileCoefficients& c, std::span<const double> sigma, std::span<double> out) {
  if (active_isa() == Isa::avx2) {
    avx2::phi_batch(c, sigma, out);
  } else {
    scalar::phi_batch(c, sigma, out);
  }
}

}  // namespace calabi::kernels

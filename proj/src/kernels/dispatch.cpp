#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "oblique/kernels.hpp"

namespace oblique::kernels {

#if defined(OBLIQUE_HAVE_AVX2_KERNELS)
namespace avx2 {
double dot(const double*, const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
TdMoments td_moments(const double*, const double*, const double*, double, std::size_t);
}  // namespace avx2
#endif
#if defined(OBLIQUE_HAVE_NEON_KERNELS)
namespace neon {
double dot(const double*, const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
TdMoments td_moments(const double*, const double*, const double*, double, std::size_t);
}  // namespace neon
#endif

namespace {

constexpr Table kScalar{Isa::kScalar, &scalar::dot, &scalar::axpy, &scalar::td_moments};
#if defined(OBLIQUE_HAVE_AVX2_KERNELS)
constexpr Table kAvx2{Isa::kAvx2, &avx2::dot, &avx2::axpy, &avx2::td_moments};
#endif
#if defined(OBLIQUE_HAVE_NEON_KERNELS)
constexpr Table kNeon{Isa::kNeon, &neon::dot, &neon::axpy, &neon::td_moments};
#endif

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(OBLIQUE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(OBLIQUE_HAVE_NEON_KERNELS)
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

const Table* initial_table() {
  if (const char* forced = std::getenv("OBLIQUE_ISA")) {
    const std::string name(forced);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (name == to_string(isa) && supported(isa)) return &table(isa);
    }
  }
  if (supported(Isa::kAvx2)) return &table(Isa::kAvx2);
  if (supported(Isa::kNeon)) return &table(Isa::kNeon);
  return &kScalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> ptr{initial_table()};
  return ptr;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) { return cpu_has(isa); }

const Table& table(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("kernel variant '" + std::string(to_string(isa)) +
                                "' is not available on this machine");
  }
  switch (isa) {
#if defined(OBLIQUE_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return kAvx2;
#endif
#if defined(OBLIQUE_HAVE_NEON_KERNELS)
    case Isa::kNeon: return kNeon;
#endif
    default: return kScalar;
  }
}

const Table& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size(), "kernels::dot");
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size(), "kernels::axpy");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

TdMoments td_moments(std::span<const double> phi, std::span<const double> phi_next,
                     std::span<const double> theta, double gamma) {
  check_sizes(phi.size(), phi_next.size(), "kernels::td_moments");
  check_sizes(phi.size(), theta.size(), "kernels::td_moments");
  return active().td_moments(phi.data(), phi_next.data(), theta.data(), gamma, phi.size());
}

}  // namespace oblique::kernels

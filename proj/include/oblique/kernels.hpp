#pragma once

// Inner-loop kernels used by the per-step learners. Each kernel has a scalar
// reference implementation and SIMD variants (AVX2+FMA on x86-64, NEON on
// AArch64). The variant is picked once at startup from the CPU's features;
// OBLIQUE_ISA=scalar|avx2|neon in the environment overrides the choice.
//
// SIMD variants reassociate sums, so they agree with the scalar reference to
// rounding, not bit-for-bit. Within one process the selection is fixed, which
// keeps every run bit-reproducible on a given machine.

#include <cstddef>
#include <span>
#include <string_view>

namespace oblique::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

/// Dot products needed by a linear TD step, gathered in one pass:
///   phi_theta = φᵀθ, next_theta = φ′ᵀθ, u_phi = uᵀφ, u_u = uᵀu, with u = φ − γφ′.
struct TdMoments {
  double phi_theta = 0.0;
  double next_theta = 0.0;
  double u_phi = 0.0;
  double u_u = 0.0;
};

struct Table {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  TdMoments (*td_moments)(const double* phi, const double* phi_next, const double* theta,
                          double gamma, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
TdMoments td_moments(const double* phi, const double* phi_next, const double* theta, double gamma,
                     std::size_t n);
}  // namespace scalar

/// True when this binary carries the variant and the CPU can run it.
bool supported(Isa isa);

/// Kernel table for a specific variant; throws std::invalid_argument if unsupported.
const Table& table(Isa isa);

/// The table currently in use.
const Table& active();

/// Switches the active table (tests and benchmarks). Not meant to be called
/// while learners are running on other threads.
void select(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
TdMoments td_moments(std::span<const double> phi, std::span<const double> phi_next,
                     std::span<const double> theta, double gamma);

}  // namespace oblique::kernels

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "oblique/kernels.hpp"

namespace oblique::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

TdMoments td_moments(const double* phi, const double* phi_next, const double* theta, double gamma,
                     std::size_t n) {
  const __m256d vg = _mm256_set1_pd(gamma);
  __m256d pt = _mm256_setzero_pd();
  __m256d nt = _mm256_setzero_pd();
  __m256d up = _mm256_setzero_pd();
  __m256d uu = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(phi + i);
    const __m256d q = _mm256_loadu_pd(phi_next + i);
    const __m256d t = _mm256_loadu_pd(theta + i);
    const __m256d u = _mm256_fnmadd_pd(vg, q, p);  // p − γq
    pt = _mm256_fmadd_pd(p, t, pt);
    nt = _mm256_fmadd_pd(q, t, nt);
    up = _mm256_fmadd_pd(u, p, up);
    uu = _mm256_fmadd_pd(u, u, uu);
  }
  TdMoments m{hsum(pt), hsum(nt), hsum(up), hsum(uu)};
  for (; i < n; ++i) {
    const double u = phi[i] - gamma * phi_next[i];
    m.phi_theta += phi[i] * theta[i];
    m.next_theta += phi_next[i] * theta[i];
    m.u_phi += u * phi[i];
    m.u_u += u * u;
  }
  return m;
}

}  // namespace oblique::kernels::avx2

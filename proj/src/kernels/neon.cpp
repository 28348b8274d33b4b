#include <arm_neon.h>

#include "oblique/kernels.hpp"

namespace oblique::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

TdMoments td_moments(const double* phi, const double* phi_next, const double* theta, double gamma,
                     std::size_t n) {
  const float64x2_t vg = vdupq_n_f64(gamma);
  float64x2_t pt = vdupq_n_f64(0.0), nt = vdupq_n_f64(0.0);
  float64x2_t up = vdupq_n_f64(0.0), uu = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vld1q_f64(phi + i);
    const float64x2_t q = vld1q_f64(phi_next + i);
    const float64x2_t t = vld1q_f64(theta + i);
    const float64x2_t u = vfmsq_f64(p, vg, q);
    pt = vfmaq_f64(pt, p, t);
    nt = vfmaq_f64(nt, q, t);
    up = vfmaq_f64(up, u, p);
    uu = vfmaq_f64(uu, u, u);
  }
  TdMoments m{vaddvq_f64(pt), vaddvq_f64(nt), vaddvq_f64(up), vaddvq_f64(uu)};
  for (; i < n; ++i) {
    const double u = phi[i] - gamma * phi_next[i];
    m.phi_theta += phi[i] * theta[i];
    m.next_theta += phi_next[i] * theta[i];
    m.u_phi += u * phi[i];
    m.u_u += u * u;
  }
  return m;
}

}  // namespace oblique::kernels::neon

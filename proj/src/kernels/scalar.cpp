#include "oblique/kernels.hpp"

namespace oblique::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

TdMoments td_moments(const double* phi, const double* phi_next, const double* theta, double gamma,
                     std::size_t n) {
  TdMoments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = phi[i] - gamma * phi_next[i];
    m.phi_theta += phi[i] * theta[i];
    m.next_theta += phi_next[i] * theta[i];
    m.u_phi += u * phi[i];
    m.u_u += u * u;
  }
  return m;
}

}  // namespace oblique::kernels::scalar

#pragma once

// Test-side oracles and random instance builders. Everything here is computed
// independently of the library code it is used to check (explicit loops,
// SVD, iteration), so agreement is evidence rather than tautology.

#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "oblique/mdp.hpp"
#include "oblique/rng.hpp"
#include "oblique/types.hpp"

namespace support {

using oblique::Matrix;
using oblique::Vector;

inline Matrix random_stochastic(oblique::Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform() + 0.05;
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

inline Matrix random_matrix(oblique::Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
  return m;
}

inline Vector random_vector(oblique::Rng& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline oblique::TabularMDP random_mdp(oblique::Rng& rng, std::size_t states, std::size_t actions,
                                      double gamma) {
  std::vector<Matrix> kernels;
  for (std::size_t a = 0; a < actions; ++a) {
    kernels.push_back(random_stochastic(rng, static_cast<Eigen::Index>(states),
                                        static_cast<Eigen::Index>(states)));
  }
  Matrix reward = random_matrix(rng, static_cast<Eigen::Index>(states),
                                static_cast<Eigen::Index>(actions), 0.0, 1.0);
  return oblique::TabularMDP(std::move(kernels), std::move(reward), gamma);
}

/// Random ergodic chain with its exact ingredients for projection checks.
struct Instance {
  oblique::InducedChain chain;
  oblique::StateDistribution xi;
  oblique::FeatureMap phi;
};

inline Instance random_instance(oblique::Rng& rng, std::size_t states, std::size_t dim, double gamma) {
  const auto n = static_cast<Eigen::Index>(states);
  oblique::InducedChain chain{random_stochastic(rng, n, n), random_vector(rng, n, 0.0, 1.0), gamma};
  Vector xi = random_vector(rng, n, 0.1, 1.0);
  xi /= xi.sum();
  return Instance{std::move(chain), oblique::StateDistribution(xi),
                  oblique::FeatureMap(random_matrix(rng, n, static_cast<Eigen::Index>(dim)))};
}

/// P^π and R^π by explicit loops.
inline std::pair<Matrix, Vector> brute_force_chain(const oblique::TabularMDP& mdp,
                                                   const oblique::Policy& pi) {
  const std::size_t n = mdp.n_states();
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Vector r = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      const auto si = static_cast<Eigen::Index>(s);
      const auto ai = static_cast<Eigen::Index>(a);
      r[si] += pi(s, a) * mdp.reward()(si, ai);
      for (std::size_t t = 0; t < n; ++t) {
        p(si, static_cast<Eigen::Index>(t)) += pi(s, a) * mdp.kernel(a)(si, static_cast<Eigen::Index>(t));
      }
    }
  }
  return {p, r};
}

/// V ← R + γPV repeated `iterations` times from zero.
inline Vector bellman_iteration(const Matrix& p, const Vector& r, double gamma, int iterations) {
  Vector v = Vector::Zero(r.size());
  for (int k = 0; k < iterations; ++k) v = r + gamma * p * v;
  return v;
}

/// Moore-Penrose pseudo-inverse from the SVD with a relative cutoff.
inline Matrix svd_pinv(const Matrix& a, double rel_tol = 1e-12) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? rel_tol * s[0] : 0.0;
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Golden-section minimization of a unimodal function on [lo, hi].
inline double golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline double relative_error(const Vector& a, const Vector& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace support

#include "oblique/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "oblique/errors.hpp"

namespace oblique {

namespace {

// Eigen's rcond() reports 1 when U has an exact zero pivot, so check those first.
double lu_condition(const Eigen::PartialPivLU<Matrix>& lu) {
  if ((lu.matrixLU().diagonal().array() == 0.0).any()) return std::numeric_limits<double>::infinity();
  const double rcond = lu.rcond();
  return rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": matrix is not square");
  }
  if (!a.allFinite()) {
    throw SingularMatrixError(std::string(what) + ": matrix has non-finite entries",
                              std::numeric_limits<double>::infinity());
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const double cond = lu_condition(lu);
  if (!(cond <= kMaxCondition)) {
    throw SingularMatrixError(std::string(what) + ": matrix is numerically singular", cond);
  }
  return lu;
}

}  // namespace

double condition_estimate(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("condition_estimate: matrix is not square");
  if (a.size() == 0) return 1.0;
  if (!a.allFinite()) return std::numeric_limits<double>::infinity();
  return lu_condition(Eigen::PartialPivLU<Matrix>(a));
}

Matrix solve(const Matrix& a, const Matrix& b, std::string_view what) {
  if (a.rows() != b.rows()) throw ShapeError(std::string(what) + ": right-hand side rows mismatch");
  return checked_lu(a, what).solve(b);
}

Vector solve(const Matrix& a, const Vector& b, std::string_view what) {
  if (a.rows() != b.size()) throw ShapeError(std::string(what) + ": right-hand side length mismatch");
  return checked_lu(a, what).solve(b);
}

double largest_gram_eigenvalue(const Matrix& a, int max_iterations, double tolerance) {
  if (a.size() == 0) return 0.0;
  // Deterministic start with no special alignment to the coordinate axes.
  Vector v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = a.transpose() * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= tolerance * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace oblique

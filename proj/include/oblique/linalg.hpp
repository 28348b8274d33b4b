#pragma once

#include <string_view>

#include "oblique/types.hpp"

namespace oblique {

/// Systems whose estimated condition number exceeds this are treated as singular.
inline constexpr double kMaxCondition = 1e10;

/// Estimated 1-norm condition number of a square matrix (infinity if singular).
double condition_estimate(const Matrix& a);

/// Solves a·x = b with partial pivoting. Throws SingularMatrixError naming
/// `what` when the condition estimate exceeds kMaxCondition.
Matrix solve(const Matrix& a, const Matrix& b, std::string_view what);
Vector solve(const Matrix& a, const Vector& b, std::string_view what);

/// Largest eigenvalue of aᵀa by power iteration (a may be rectangular).
double largest_gram_eigenvalue(const Matrix& a, int max_iterations = 10000,
                               double tolerance = 1e-12);

}  // namespace oblique

#pragma once

#include <Eigen/Dense>

namespace oblique {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace oblique

#pragma once

#include <Eigen/Core>

namespace repbandit {

/// Midpoint of the cell of the width-`alpha` grid shifted by `u` that
/// contains z: alpha*floor((z-u)/alpha) + u + alpha/2. Requires alpha > 0
/// and 0 <= u < alpha. Ties exactly on a boundary resolve by the floor
/// convention.
double grid_round_scalar(double z, double alpha, double u);

/// Coordinatewise grid rounding; |out_j - z_j| <= alpha/2 for every j.
Eigen::VectorXd grid_round(const Eigen::VectorXd& z, double alpha,
                           const Eigen::VectorXd& u);

}  // namespace repbandit

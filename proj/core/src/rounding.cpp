#include "repbandit/rounding.hpp"

#include <cmath>

#include "repbandit/errors.hpp"

namespace repbandit {

double grid_round_scalar(double z, double alpha, double u) {
  if (!(alpha > 0.0)) {
    throw InputError("grid_round: alpha must be positive");
  }
  if (!(u >= 0.0 && u < alpha)) {
    throw InputError("grid_round: shift must lie in [0, alpha)");
  }
  return alpha * std::floor((z - u) / alpha) + u + alpha / 2.0;
}

Eigen::VectorXd grid_round(const Eigen::VectorXd& z, double alpha,
                           const Eigen::VectorXd& u) {
  if (u.size() != z.size()) {
    throw InputError("grid_round: shift dimension mismatch");
  }
  Eigen::VectorXd out(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    out[j] = grid_round_scalar(z[j], alpha, u[j]);
  }
  return out;
}

}  // namespace repbandit

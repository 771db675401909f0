#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <optional>

#include "repbandit/randomness.hpp"

namespace repbandit {

/// Sufficient statistics of a ridge regression: V = lambda*I + sum x_i x_i^T,
/// b = sum x_i y_i, and the sample count. The log-determinant is maintained
/// incrementally through the rank-one determinant lemma and recomputed from a
/// fresh factorization every 256 updates to cap drift.
class GramState {
 public:
  GramState(int dim, double lambda);

  void update(const Eigen::VectorXd& x, double y);

  const Eigen::MatrixXd& V() const { return v_; }
  const Eigen::VectorXd& b() const { return b_; }
  long long n() const { return n_; }
  int dim() const { return static_cast<int>(v_.rows()); }
  double lambda() const { return lambda_; }
  double log_det() const { return log_det_; }

  /// V^{-1} rhs through a cached Cholesky factorization.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// rhs^T V^{-1} rhs.
  double inv_quad_form(const Eigen::VectorXd& rhs) const;

 private:
  const Eigen::LLT<Eigen::MatrixXd>& llt() const;

  Eigen::MatrixXd v_;
  Eigen::VectorXd b_;
  long long n_ = 0;
  double lambda_;
  double log_det_;
  int updates_since_refresh_ = 0;
  mutable std::optional<Eigen::LLT<Eigen::MatrixXd>> llt_cache_;
};

/// Ridge solution V theta = b; residual checked against 1e-9*(||b||+1).
Eigen::VectorXd ridge_fit(const GramState& s);

/// Confidence radius sigma*sqrt(2*log(det(V)^{1/2}/(det(lambda I)^{1/2} *
/// delta))) + sqrt(lambda)*S, evaluated with log-determinants.
double beta_radius(const GramState& s, double delta, double sigma, double S);

/// Symmetric square root of an SPD matrix and its inverse, both applied
/// through one eigendecomposition so sqrt and inv-sqrt are mutually
/// consistent to machine precision.
class SpdSqrt {
 public:
  explicit SpdSqrt(const Eigen::MatrixXd& v);

  Eigen::VectorXd apply_sqrt(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_inv_sqrt(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd sqrt_matrix() const;

 private:
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd sqrt_values_;
};

/// Symmetric W with W*W ~= V; throws InputError on asymmetric input and
/// NumericError when V is not positive definite.
Eigen::MatrixXd matrix_sqrt_spd(const Eigen::MatrixXd& v);

struct RepRidgeParams {
  double delta = 0.0;  // confidence level
  double rho = 0.0;    // replicability target, must exceed 2*delta
  double sigma = 0.0;  // noise scale
  double S = 0.0;      // parameter norm bound
};

/// Output of the replicable ridge estimator, together with the grid
/// parameters that produced it.
struct ReplicableEstimate {
  Eigen::VectorXd theta_tilde;  // replicable estimate
  Eigen::VectorXd theta_hat;    // pre-rounding ridge solution
  double alpha = 0.0;           // grid width 2*beta*sqrt(d)/(rho-2*delta)
  Eigen::VectorXd shift;        // grid shift in [0,alpha)^d
  double beta = 0.0;
  double beta_inflated = 0.0;  // beta * (1 + d/(rho-2*delta))
};

/// Replicable ridge regression: whiten the ridge solution by V^{1/2}, snap
/// it to a shared randomly-shifted grid, and map back by V^{-1/2}. The shift
/// is read from `shift_stream` at cursor 0 (d uniforms scaled by alpha), so
/// two runs on the same design consume identical shifts.
ReplicableEstimate rep_ridge(const GramState& s, const RepRidgeParams& p,
                             StreamHandle shift_stream);

}  // namespace repbandit

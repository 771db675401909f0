#include "repbandit/repridge.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "repbandit/errors.hpp"
#include "repbandit/rounding.hpp"

namespace repbandit {

namespace {
constexpr int kLogDetRefreshInterval = 256;

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(l(i, i));
  }
  return 2.0 * acc;
}
}  // namespace

GramState::GramState(int dim, double lambda) : lambda_(lambda) {
  if (dim < 1) {
    throw InputError("GramState: dimension must be >= 1");
  }
  if (!(lambda > 0.0)) {
    throw InputError("GramState: lambda must be positive");
  }
  v_ = lambda * Eigen::MatrixXd::Identity(dim, dim);
  b_ = Eigen::VectorXd::Zero(dim);
  log_det_ = dim * std::log(lambda);
}

const Eigen::LLT<Eigen::MatrixXd>& GramState::llt() const {
  if (!llt_cache_) {
    llt_cache_.emplace(v_);
    if (llt_cache_->info() != Eigen::Success) {
      throw NumericError("GramState: Cholesky factorization failed");
    }
  }
  return *llt_cache_;
}

void GramState::update(const Eigen::VectorXd& x, double y) {
  if (x.size() != v_.rows()) {
    throw InputError("GramState::update: dimension mismatch");
  }
  // Rank-one determinant lemma, evaluated before the matrix changes.
  log_det_ += std::log1p(inv_quad_form(x));
  v_.noalias() += x * x.transpose();
  b_.noalias() += x * y;
  ++n_;
  llt_cache_.reset();
  if (++updates_since_refresh_ >= kLogDetRefreshInterval) {
    log_det_ = log_det_from_llt(llt());
    updates_since_refresh_ = 0;
  }
}

Eigen::VectorXd GramState::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != v_.rows()) {
    throw InputError("GramState::solve: dimension mismatch");
  }
  return llt().solve(rhs);
}

double GramState::inv_quad_form(const Eigen::VectorXd& rhs) const {
  return rhs.dot(solve(rhs));
}

Eigen::VectorXd ridge_fit(const GramState& s) {
  Eigen::VectorXd theta = s.solve(s.b());
  // One refinement step; small dense systems then sit well under the bound.
  Eigen::VectorXd residual = s.b() - s.V() * theta;
  theta += s.solve(residual);
  residual = s.b() - s.V() * theta;
  if (residual.norm() > 1e-9 * (s.b().norm() + 1.0)) {
    throw NumericError("ridge_fit: residual exceeds tolerance");
  }
  return theta;
}

double beta_radius(const GramState& s, double delta, double sigma, double S) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InputError("beta_radius: delta must lie in (0,1)");
  }
  const double half_log_det_ratio =
      0.5 * (s.log_det() - s.dim() * std::log(s.lambda()));
  return sigma * std::sqrt(2.0 * (half_log_det_ratio - std::log(delta))) +
         std::sqrt(s.lambda()) * S;
}

SpdSqrt::SpdSqrt(const Eigen::MatrixXd& v) {
  const double asym = (v - v.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, v.cwiseAbs().maxCoeff())) {
    throw InputError("SpdSqrt: input matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
  if (es.info() != Eigen::Success) {
    throw NumericError("SpdSqrt: eigendecomposition failed");
  }
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw NumericError("SpdSqrt: matrix is not positive definite");
  }
  vectors_ = es.eigenvectors();
  sqrt_values_ = es.eigenvalues().cwiseSqrt();
}

Eigen::VectorXd SpdSqrt::apply_sqrt(const Eigen::VectorXd& x) const {
  return vectors_ * (sqrt_values_.asDiagonal() * (vectors_.transpose() * x));
}

Eigen::VectorXd SpdSqrt::apply_inv_sqrt(const Eigen::VectorXd& x) const {
  return vectors_ *
         (sqrt_values_.cwiseInverse().asDiagonal() * (vectors_.transpose() * x));
}

Eigen::MatrixXd SpdSqrt::sqrt_matrix() const {
  return vectors_ * sqrt_values_.asDiagonal() * vectors_.transpose();
}

Eigen::MatrixXd matrix_sqrt_spd(const Eigen::MatrixXd& v) {
  return SpdSqrt(v).sqrt_matrix();
}

ReplicableEstimate rep_ridge(const GramState& s, const RepRidgeParams& p,
                             StreamHandle shift_stream) {
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    throw ConfigError("rep_ridge: delta must lie in (0,1)");
  }
  if (!(p.rho > 2.0 * p.delta && p.rho < 1.0)) {
    throw ConfigError("rep_ridge: requires rho in (2*delta, 1)");
  }
  const int d = s.dim();
  ReplicableEstimate est;
  est.theta_hat = ridge_fit(s);
  est.beta = beta_radius(s, p.delta, p.sigma, p.S);
  if (!(est.beta > 0.0)) {
    throw ConfigError("rep_ridge: beta = 0 gives a degenerate grid");
  }
  est.alpha = 2.0 * est.beta * std::sqrt(static_cast<double>(d)) /
              (p.rho - 2.0 * p.delta);
  est.beta_inflated =
      est.beta * (1.0 + static_cast<double>(d) / (p.rho - 2.0 * p.delta));

  shift_stream.seek(0);
  est.shift.resize(d);
  for (int j = 0; j < d; ++j) {
    est.shift[j] = shift_stream.next_uniform() * est.alpha;
  }

  const SpdSqrt whitener(s.V());
  const Eigen::VectorXd z = whitener.apply_sqrt(est.theta_hat);
  est.theta_tilde =
      whitener.apply_inv_sqrt(grid_round(z, est.alpha, est.shift));
  return est;
}

}  // namespace repbandit

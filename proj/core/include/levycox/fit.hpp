#pragma once

#include <Eigen/Core>
#include <memory>

#include "levycox/hazard_path.hpp"
#include "levycox/risk_sets.hpp"

namespace levycox {

struct LogLik {
  double value = 0.0;
  Eigen::VectorXd gradient;  // filled when order >= 1
  Eigen::MatrixXd hessian;   // filled when order == 2
};

/// Log partial likelihood of the proportional-hazards model,
///   l(beta) = sum_events [ beta'Z_death - log( n^{-1} sum_{risk set} e^{beta'Z} ) ],
/// with analytic gradient and Hessian (risk-set weighted mean and covariance).
/// The Hessian is negative semidefinite everywhere: l is concave.
class PartialLikelihood {
 public:
  /// Requires a validated dataset with at least one uncensored record; throws
  /// ValidationError otherwise.
  explicit PartialLikelihood(const SurvivalDataset& ds);

  LogLik eval(const Eigen::VectorXd& beta, int order) const;

  int n() const { return sorted_->n; }
  int p() const { return sorted_->p; }
  int q() const { return sorted_->q(); }
  double max_l1_norm() const { return max_l1_; }
  const detail::SortedData& sorted() const { return *sorted_; }

 private:
  std::shared_ptr<const detail::SortedData> sorted_;
  double max_l1_ = 0.0;
};

struct FitResult {
  Eigen::VectorXd beta_hat;
  Eigen::MatrixXd info_hat;  // -hessian(beta_hat) / n
  HazardPath breslow;        // baseline cumulative hazard at beta_hat
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;  // sup norm at exit
};

/// Damped Newton ascent on the log partial likelihood with step halving and
/// a gradient-ascent fallback for numerically singular Hessians. Converged
/// means sup-norm gradient below `tol`. Monotone likelihoods (no finite
/// maximizer) are detected when ||beta||_1 exceeds 50 / max_l1_norm and
/// reported as NumericalError rather than returning a silently huge estimate.
FitResult fit_mle(const PartialLikelihood& lik,
                  Eigen::VectorXd init = Eigen::VectorXd(), double tol = 1e-8,
                  int max_iter = 50);

/// Breslow estimator of the baseline cumulative hazard at `beta`:
/// jumps |D(t_i)| / sum_{R(t_i)} e^{beta'Z_j} at the uncensored times.
HazardPath breslow(const SurvivalDataset& ds, const Eigen::VectorXd& beta);
HazardPath breslow(const PartialLikelihood& lik, const Eigen::VectorXd& beta);

}  // namespace levycox

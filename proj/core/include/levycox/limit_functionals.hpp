#pragma once

#include <Eigen/Core>
#include <vector>

#include "levycox/fit.hpp"

namespace levycox {

/// Empirical plug-in versions of the functionals that parametrize the
/// large-sample law of the estimators: S^k(t) = n^{-1} sum_j Z_j^{(x)k}
/// e^{beta'Z_j} 1{T_j >= t} for k = 0,1,2, the cumulative quantities
/// U0(t) = int dA / S^0 and e0(t) = int (S^1/S^0) dA taken against the
/// Breslow path, and the information I = int V S^0 dA with the local
/// covariance V = S^2/S^0 - (S^1/S^0)^{(x)2}. With singleton deaths the
/// integral form of I coincides exactly with -hessian/n of the partial
/// likelihood.
class LimitFunctionals {
 public:
  LimitFunctionals(const SurvivalDataset& ds, const Eigen::VectorXd& beta,
                   const HazardPath& breslow_path);

  double S0(double t) const;
  Eigen::VectorXd S1(double t) const;

  /// Cumulative variance scale of the hazard limit; step function in t.
  double U0(double t) const;
  /// Cumulative coupling between hazard and coefficient limits.
  Eigen::VectorXd e0(double t) const;

  const Eigen::MatrixXd& information() const { return info_; }

  int n() const { return n_; }
  int p() const { return p_; }
  double last_event_time() const {
    return event_times_.empty() ? 0.0 : event_times_.back();
  }

 private:
  friend double limit_covariance_A(double, double, const LimitFunctionals&);

  int n_ = 0;
  int p_ = 0;
  std::vector<double> sorted_times_;   // all observed times ascending
  std::vector<double> suffix_s0_;      // suffix sums of e^{beta'Z} / n
  Eigen::MatrixXd suffix_s1_;          // p x (n+1), suffix sums of Z e^{beta'Z} / n
  std::vector<double> event_times_;
  std::vector<double> u0_at_event_;    // cumulative
  Eigen::MatrixXd e0_at_event_;        // p x q, cumulative
  Eigen::MatrixXd info_;
  Eigen::MatrixXd info_inverse_;
  bool info_invertible_ = false;
};

LimitFunctionals limit_functionals(const SurvivalDataset& ds,
                                   const Eigen::VectorXd& beta,
                                   const HazardPath& breslow_path);

/// Covariance function of the limiting hazard fluctuation process:
/// U0(min(s,t)) + e0(s)' I^{-1} e0(t). Throws NumericalError when the
/// information matrix is singular.
double limit_covariance_A(double s, double t, const LimitFunctionals& fn);

}  // namespace levycox

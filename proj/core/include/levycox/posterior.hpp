#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levycox/dataset.hpp"
#include "levycox/fit.hpp"
#include "levycox/prior.hpp"
#include "levycox/quadrature.hpp"
#include "levycox/rng.hpp"

namespace levycox {

/// Prior density for the regression coefficients. Only continuity and
/// positivity near the truth matter for the asymptotics; the default is an
/// independent mean-zero Gaussian with a wide scale per coordinate.
struct CoefficientPrior {
  std::function<double(const Eigen::VectorXd&)> log_density;
  std::string description;

  static CoefficientPrior gaussian(int p, double scale = 10.0);
};

/// Distribution of the fixed posterior jump at one event time: density on
/// [0,1] proportional to
///   prod_{j in D(t_i)} (1 - (1-x)^{a_j}) * (1-x)^{sum_{R+(t_i)} a_j} * g_{t_i}(x) / x
/// with a_j = e^{beta'Z_j}. Carries the quadrature normalizer and a CDF
/// tabulated on the adaptive integration grid (in the u = -log(1-x)
/// coordinate) for inverse sampling.
class JumpDistribution {
 public:
  int event_index() const { return event_index_; }
  double event_time() const { return t_; }
  double normalizer() const { return normalizer_; }

  double unnormalized_density(double x) const;
  double density(double x) const { return unnormalized_density(x) / normalizer_; }
  double cdf(double x) const;

  /// Inverse CDF by monotone cubic interpolation of the tabulated grid.
  double quantile(double pr) const;
  double sample(Rng& rng) const { return quantile(rng.uniform()); }

  /// k-th moment, exact by quadrature (k >= 1).
  double moment(int k) const;

 private:
  friend class CoxPosterior;
  int event_index_ = 0;
  double t_ = 0.0;
  std::vector<double> death_scores_;
  double reduced_risk_sum_ = 0.0;  // sum over R+ of e^{beta'Z}
  NiiPrior prior_;
  double normalizer_ = 0.0;
  MonotoneCubic cdf_table_;  // u -> normalized CDF

  JumpDistribution(NiiPrior prior) : prior_(std::move(prior)) {}
};

enum class JumpMomentMode { Exact, GammaRatio };

struct ChainConfig {
  int draws = 20000;
  int burn_in = 2000;
  std::uint64_t seed = 1;
};

struct ChainResult {
  std::vector<Eigen::VectorXd> draws;  // post burn-in
  double acceptance_rate = 0.0;
};

/// Exact posterior of (beta, A) for right-censored proportional-hazards data
/// under an NII prior on the baseline cumulative hazard. Provides the
/// fixed-jump laws, the unnormalized log marginal posterior of beta, and
/// seeded samplers for jumps, full hazard paths, and beta chains.
///
/// All evaluations are pure functions of (dataset, prior, beta); instances
/// are immutable after construction and safe to share across threads. For
/// beta-process priors the jump integrals have digamma/Beta-function closed
/// forms which are used automatically; `Options::force_quadrature` disables
/// them so tests can compare the two routes.
class CoxPosterior {
 public:
  struct Options {
    bool force_quadrature = false;
    // Skip dataset validation; for synthetic constructions (tied deaths)
    // exercised in tests. The jump laws support multi-member death sets.
    bool skip_validation = false;
  };

  CoxPosterior(const SurvivalDataset& ds, NiiPrior prior,
               CoefficientPrior coef_prior, Options options);
  CoxPosterior(const SurvivalDataset& ds, NiiPrior prior,
               CoefficientPrior coef_prior);
  CoxPosterior(const SurvivalDataset& ds, NiiPrior prior);

  int n() const { return sorted_.n; }
  int p() const { return sorted_.p; }
  int q() const { return sorted_.q(); }
  double event_time(int event) const { return sorted_.event_time(event); }
  const NiiPrior& prior() const { return prior_; }
  const CoefficientPrior& coefficient_prior() const { return coef_prior_; }

  /// Law of the fixed jump at event `event` (0-based, ordered by time).
  JumpDistribution jump_distribution(int event, const Eigen::VectorXd& beta) const;

  /// k-th posterior jump moment: Exact integrates x^k against the jump law;
  /// GammaRatio is the large-n approximation k! Gamma(R+1)/Gamma(R+k+1) with
  /// R the risk-set score sum at the event.
  double jump_moment(int event, const Eigen::VectorXd& beta, int k,
                     JumpMomentMode mode) const;

  /// The compensator-style term of the marginal posterior: sum over records
  /// of a time integral of the Levy measure tilted by the records at risk.
  /// Nonnegative; linear in the prior rate.
  double rho(const Eigen::VectorXd& beta) const;

  /// Unnormalized log marginal posterior of beta:
  /// -rho(beta) + sum_i log(n * lambda(t_i) * Z_i(beta)) + log pi(beta)
  /// where Z_i is the jump-law normalizer at event i.
  double log_marginal(const Eigen::VectorXd& beta) const;

  /// One inverse-CDF draw from the jump law at `event`.
  double sample_jump(int event, const Eigen::VectorXd& beta,
                     std::uint64_t seed) const;

  /// One posterior hazard path on [0, tau]: fixed jumps at the event times
  /// plus the epsilon-truncated continuous component (risk-tilted prior
  /// measure) with mean compensation for the suppressed small jumps.
  HazardPath sample_path(const Eigen::VectorXd& beta, double epsilon,
                         std::uint64_t seed) const;

  /// Total mean of the continuous posterior component on [0, tau]; O(1/n).
  double continuous_mean(const Eigen::VectorXd& beta) const;

  /// Exact small-jump compensation added by sample_path up to time t.
  double path_compensation(const Eigen::VectorXd& beta, double epsilon,
                           double t) const;

 private:
  struct BetaState;  // per-beta scores and suffix sums

  BetaState state(const Eigen::VectorXd& beta) const;
  double log_jump_normalizer(int event, const BetaState& st) const;
  double rho_impl(const BetaState& st) const;
  bool analytic() const;

  detail::SortedData sorted_;
  NiiPrior prior_;
  CoefficientPrior coef_prior_;
  Options options_;
};

/// Random-walk Metropolis chain for the marginal posterior of beta: Gaussian
/// proposal with covariance (2.38^2/p) * info_hat^{-1} / n, started at the
/// MLE. Deterministic given the seed.
ChainResult sample_beta_posterior(const CoxPosterior& posterior,
                                  const FitResult& fit,
                                  const ChainConfig& config);

}  // namespace levycox

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levycox/limit_functionals.hpp"
#include "levycox/posterior.hpp"

namespace levycox {

/// Standard normal CDF.
double normal_cdf(double x);

/// Two-sample Kolmogorov-Smirnov statistic (sup distance between empirical
/// CDFs, sorted-merge sweep). Throws ValidationError on empty input.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// One-sample Kolmogorov-Smirnov statistic against an analytic CDF.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

/// L1 distance between a Gaussian kernel density estimate of the sample
/// (Silverman bandwidth) and a reference density, integrated over +-6
/// reference standard deviations. Throws ValidationError for samples smaller
/// than 100 or with zero variance.
double l1_density_distance(const std::vector<double>& sample,
                           const std::function<double(double)>& ref_density,
                           double ref_mean, double ref_sd);

/// Convenience overload: reference N(mean, sd^2).
double l1_density_distance(const std::vector<double>& sample, double ref_mean,
                           double ref_sd);

/// Effective sample size of a (possibly autocorrelated) series via the
/// initial positive sequence of autocovariances.
double effective_sample_size(const std::vector<double>& series);

/// Monte-Carlo standard error of the mean of a correlated series by the
/// batch-means method.
double batch_means_se(const std::vector<double>& series, int batches = 50);

struct BvmThresholds {
  double ks = 0.05;
  double cov_rel_err = 0.15;
  double mean_gap_factor = 5.0;  // gap bound is factor / n
};

struct BetaCheck {
  std::vector<double> ks;          // per coordinate, draws vs N(0, I^{-1}) marginal
  std::optional<double> l1;        // kernel L1 distance, p = 1 only
  std::optional<double> mahalanobis_ks;  // radius^2 vs chi^2_p, p > 1 only
  bool verdict = false;
};

struct HazardCheck {
  std::vector<double> grid;
  double mean_gap = 0.0;      // sup_grid |posterior mean A - Breslow|
  double cov_rel_err = 0.0;   // vs the limit covariance
  bool verdict = false;
  Eigen::MatrixXd empirical_covariance;  // of sqrt(n)(A - A_hat); not serialized
};

struct CoverageReport {
  int replications = 0;
  int skipped = 0;  // monotone-likelihood replications
  double level = 0.0;
  std::vector<double> coverage;    // per coordinate
  std::vector<double> mean_width;  // per coordinate
};

struct BvmReport {
  int n = 0;
  int p = 0;
  std::uint64_t seed = 0;
  std::string prior;
  BvmThresholds thresholds;
  BetaCheck beta;
  std::optional<HazardCheck> hazard;
  std::optional<CoverageReport> coverage;
};

/// Compare the scaled draws sqrt(n)(beta - beta_hat) with the limiting
/// N(0, info_hat^{-1}) law coordinate by coordinate (analytic-CDF KS), plus
/// the kernel L1 distance for p = 1 and the Mahalanobis-radius check against
/// chi^2_p for p > 1. Throws ValidationError when the fit did not converge.
BetaCheck bvm_beta_check(const FitResult& fit,
                         const std::vector<Eigen::VectorXd>& draws, int n,
                         const BvmThresholds& thresholds = {});

/// Joint hazard check: for each supplied beta draw, sample one posterior
/// hazard path and evaluate it on `grid`; compare the posterior mean path
/// with the Breslow estimator (sup gap <= factor/n) and the empirical
/// covariance of sqrt(n)(A - A_hat) with the limit covariance
/// U0(min) + e0' I^{-1} e0 (max elementwise relative error). Grid points must
/// not exceed the last event time.
HazardCheck bvm_A_check(const CoxPosterior& posterior, const FitResult& fit,
                        const LimitFunctionals& fn,
                        const std::vector<Eigen::VectorXd>& beta_draws,
                        double epsilon, const std::vector<double>& grid,
                        std::uint64_t seed,
                        const BvmThresholds& thresholds = {});

struct CoverageConfig {
  int replications = 200;
  double level = 0.90;
  int n = 500;
  int chain_draws = 4000;
  int chain_burn_in = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

/// Frequentist coverage of equal-tailed posterior credible intervals over
/// independent replications of (simulate, fit, chain). Replications run
/// concurrently with seeds derived per replication (derive_seed), so the
/// report is deterministic regardless of scheduling. Monotone-likelihood
/// replications are skipped and counted.
CoverageReport coverage_experiment(const TrueModelSpec& spec,
                                   const NiiPrior& prior,
                                   const CoverageConfig& config);

/// Full pipeline: fit, chain, beta check, hazard check on an event-time
/// quantile grid. Convenience wrapper used by the CLI.
struct BvmPipelineConfig {
  ChainConfig chain;
  double epsilon = 1e-4;
  int grid_points = 10;
  int path_draws = 2000;
  BvmThresholds thresholds;
};

BvmReport run_bvm_pipeline(const SurvivalDataset& ds, const NiiPrior& prior,
                           const BvmPipelineConfig& config);

enum class ReportFormat { Json, Csv };

/// Serialize / parse a report through the documented schema; emit-parse-emit
/// is byte identical.
std::string emit_report(const BvmReport& report, ReportFormat format);
BvmReport parse_report(const std::string& text, ReportFormat format);

}  // namespace levycox

#include "levycox/diagnostics.hpp"

#include <algorithm>
#include <Eigen/LU>
#include <atomic>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <thread>

#include "levycox/quadrature.hpp"

namespace levycox {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw ValidationError("ks_statistic: samples must be nonempty");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty())
    throw ValidationError("ks_statistic: sample must be nonempty");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

namespace {

double sample_sd(const std::vector<double>& sample, double mean) {
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (static_cast<double>(sample.size()) - 1.0));
}

}  // namespace

double l1_density_distance(const std::vector<double>& sample,
                           const std::function<double(double)>& ref_density,
                           double ref_mean, double ref_sd) {
  const std::size_t m = sample.size();
  if (m < 100)
    throw ValidationError("l1_density_distance: need at least 100 points");
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) /
                      static_cast<double>(m);
  const double sd = sample_sd(sample, mean);
  if (!(sd > 0.0))
    throw ValidationError("l1_density_distance: sample variance is zero");

  std::vector<double> sorted(sample);
  std::sort(sorted.begin(), sorted.end());
  const double q1 = sorted[static_cast<std::size_t>(0.25 * (m - 1))];
  const double q3 = sorted[static_cast<std::size_t>(0.75 * (m - 1))];
  const double iqr = q3 - q1;
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  const double bandwidth =
      0.9 * spread * std::pow(static_cast<double>(m), -0.2);

  const double inv_norm =
      1.0 / (static_cast<double>(m) * bandwidth * std::sqrt(2.0 * 3.14159265358979323846));
  auto kde = [&](double x) {
    // Kernel support is effectively 8 bandwidths; restrict to that window.
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - 8.0 * bandwidth);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x + 8.0 * bandwidth);
    double total = 0.0;
    for (auto it = lo; it != hi; ++it) {
      const double z = (x - *it) / bandwidth;
      total += std::exp(-0.5 * z * z);
    }
    return total * inv_norm;
  };

  QuadOptions opt;
  opt.abs_tol = 1e-6;
  opt.rel_tol = 1e-6;
  std::vector<double> breaks;
  for (int j = 1; j < 24; ++j)
    breaks.push_back(ref_mean - 6.0 * ref_sd + j * 0.5 * ref_sd);
  return integrate(
      [&](double x) { return std::abs(kde(x) - ref_density(x)); },
      ref_mean - 6.0 * ref_sd, ref_mean + 6.0 * ref_sd, opt, breaks);
}

double l1_density_distance(const std::vector<double>& sample, double ref_mean,
                           double ref_sd) {
  const double inv = 1.0 / (ref_sd * std::sqrt(2.0 * 3.14159265358979323846));
  return l1_density_distance(
      sample,
      [=](double x) {
        const double z = (x - ref_mean) / ref_sd;
        return inv * std::exp(-0.5 * z * z);
      },
      ref_mean, ref_sd);
}

double effective_sample_size(const std::vector<double>& series) {
  const std::size_t m = series.size();
  if (m < 4) return static_cast<double>(m);
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                      static_cast<double>(m);
  std::vector<double> centered(m);
  for (std::size_t i = 0; i < m; ++i) centered[i] = series[i] - mean;
  const auto autocov = [&](std::size_t lag) {
    double total = 0.0;
    for (std::size_t i = 0; i + lag < m; ++i)
      total += centered[i] * centered[i + lag];
    return total / static_cast<double>(m);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return static_cast<double>(m);
  // Geyer's initial positive sequence over lag pairs.
  double rho_sum = 0.0;
  for (std::size_t lag = 1; lag + 1 < m; lag += 2) {
    const double pair = autocov(lag) + autocov(lag + 1);
    if (pair <= 0.0) break;
    rho_sum += pair;
  }
  return static_cast<double>(m) / (1.0 + 2.0 * rho_sum / c0);
}

double batch_means_se(const std::vector<double>& series, int batches) {
  const std::size_t m = series.size();
  if (batches < 2 || m < static_cast<std::size_t>(2 * batches))
    throw ValidationError("batch_means_se: series too short for the batches");
  const std::size_t batch_len = m / static_cast<std::size_t>(batches);
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * batch_len;
    double total = 0.0;
    for (std::size_t i = begin; i < begin + batch_len; ++i) total += series[i];
    means.push_back(total / static_cast<double>(batch_len));
  }
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) /
                       static_cast<double>(batches);
  double ss = 0.0;
  for (double x : means) ss += (x - grand) * (x - grand);
  return std::sqrt(ss / (batches - 1.0) / batches);
}

BetaCheck bvm_beta_check(const FitResult& fit,
                         const std::vector<Eigen::VectorXd>& draws, int n,
                         const BvmThresholds& thresholds) {
  if (!fit.converged)
    throw ValidationError("bvm_beta_check: MLE did not converge");
  if (draws.empty())
    throw ValidationError("bvm_beta_check: no posterior draws");
  const int p = static_cast<int>(fit.beta_hat.size());
  const double root_n = std::sqrt(static_cast<double>(n));

  const Eigen::MatrixXd cov = fit.info_hat.inverse();

  BetaCheck check;
  for (int k = 0; k < p; ++k) {
    const double sd = std::sqrt(cov(k, k));
    std::vector<double> scaled;
    scaled.reserve(draws.size());
    for (const auto& d : draws)
      scaled.push_back(root_n * (d(k) - fit.beta_hat(k)));
    check.ks.push_back(ks_statistic(
        scaled, [sd](double x) { return normal_cdf(x / sd); }));
    if (p == 1) check.l1 = l1_density_distance(scaled, 0.0, sd);
  }

  if (p > 1) {
    const Eigen::MatrixXd info = fit.info_hat;
    std::vector<double> radius;
    radius.reserve(draws.size());
    for (const auto& d : draws) {
      const Eigen::VectorXd h = root_n * (d - fit.beta_hat);
      radius.push_back(h.dot(info * h));
    }
    const double half_p = 0.5 * p;
    check.mahalanobis_ks = ks_statistic(radius, [half_p](double x) {
      return x <= 0.0 ? 0.0 : boost::math::gamma_p(half_p, 0.5 * x);
    });
  }

  check.verdict = true;
  for (double ks : check.ks)
    if (!(ks < thresholds.ks)) check.verdict = false;
  return check;
}

HazardCheck bvm_A_check(const CoxPosterior& posterior, const FitResult& fit,
                        const LimitFunctionals& fn,
                        const std::vector<Eigen::VectorXd>& beta_draws,
                        double epsilon, const std::vector<double>& grid,
                        std::uint64_t seed, const BvmThresholds& thresholds) {
  if (beta_draws.empty())
    throw ValidationError("bvm_A_check: no joint draws supplied");
  if (grid.empty()) throw ValidationError("bvm_A_check: empty time grid");
  for (double t : grid)
    if (t > fn.last_event_time() || t <= 0.0)
      throw ValidationError(
          "bvm_A_check: grid point outside (0, last event time]");

  const int g = static_cast<int>(grid.size());
  const std::size_t m = beta_draws.size();
  const double root_n = std::sqrt(static_cast<double>(posterior.n()));

  Eigen::MatrixXd evals(static_cast<int>(m), g);
  for (std::size_t d = 0; d < m; ++d) {
    const HazardPath path =
        posterior.sample_path(beta_draws[d], epsilon, derive_seed(seed, d));
    for (int j = 0; j < g; ++j)
      evals(static_cast<int>(d), j) =
          root_n * (path(grid[j]) - fit.breslow(grid[j]));
  }

  HazardCheck check;
  check.grid = grid;

  const Eigen::RowVectorXd mean = evals.colwise().mean();
  check.mean_gap = (mean / root_n).cwiseAbs().maxCoeff();

  const Eigen::MatrixXd centered = evals.rowwise() - mean;
  const Eigen::MatrixXd emp_cov =
      centered.transpose() * centered / (static_cast<double>(m) - 1.0);
  check.empirical_covariance = emp_cov;

  double rel_err = 0.0;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const double limit = limit_covariance_A(grid[static_cast<std::size_t>(i)],
                                              grid[static_cast<std::size_t>(j)], fn);
      rel_err = std::max(
          rel_err, std::abs(emp_cov(i, j) - limit) / std::max(limit, 1e-12));
    }
  check.cov_rel_err = rel_err;

  const double gap_bound =
      thresholds.mean_gap_factor / static_cast<double>(posterior.n());
  check.verdict =
      check.mean_gap <= gap_bound && check.cov_rel_err <= thresholds.cov_rel_err;
  return check;
}

CoverageReport coverage_experiment(const TrueModelSpec& spec,
                                   const NiiPrior& prior,
                                   const CoverageConfig& config) {
  if (config.replications < 50)
    throw ConfigError("coverage_experiment: need at least 50 replications");
  if (!(config.level > 0.0 && config.level < 1.0))
    throw ConfigError("coverage_experiment: level must lie in (0,1)");
  const int p = static_cast<int>(spec.beta0.size());
  const int reps = config.replications;

  struct RepOutcome {
    bool skipped = false;
    std::vector<int> covered;
    std::vector<double> width;
  };
  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

  auto run_one = [&](int r) {
    RepOutcome& out = outcomes[static_cast<std::size_t>(r)];
    const std::uint64_t rep_seed =
        derive_seed(config.seed, static_cast<std::uint64_t>(r));
    const SurvivalDataset ds =
        simulate_ph_data(spec, config.n, derive_seed(rep_seed, 0));
    try {
      const PartialLikelihood lik(ds);
      const FitResult fit = fit_mle(lik);
      if (!fit.converged) {
        out.skipped = true;
        return;
      }
      const CoxPosterior posterior(ds, prior);
      ChainConfig chain;
      chain.draws = config.chain_draws;
      chain.burn_in = config.chain_burn_in;
      chain.seed = derive_seed(rep_seed, 1);
      const ChainResult result = sample_beta_posterior(posterior, fit, chain);

      out.covered.resize(static_cast<std::size_t>(p));
      out.width.resize(static_cast<std::size_t>(p));
      const double tail = 0.5 * (1.0 - config.level);
      for (int k = 0; k < p; ++k) {
        std::vector<double> coord;
        coord.reserve(result.draws.size());
        for (const auto& d : result.draws) coord.push_back(d(k));
        std::sort(coord.begin(), coord.end());
        const std::size_t mm = coord.size();
        const double lo = coord[static_cast<std::size_t>(tail * (mm - 1))];
        const double hi = coord[static_cast<std::size_t>((1.0 - tail) * (mm - 1))];
        out.covered[static_cast<std::size_t>(k)] =
            (spec.beta0(k) >= lo && spec.beta0(k) <= hi) ? 1 : 0;
        out.width[static_cast<std::size_t>(k)] = hi - lo;
      }
    } catch (const NumericalError&) {
      out.skipped = true;
    }
  };

  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, reps));
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1))
        run_one(r);
    });
  for (auto& th : pool) th.join();

  CoverageReport report;
  report.replications = reps;
  report.level = config.level;
  report.coverage.assign(static_cast<std::size_t>(p), 0.0);
  report.mean_width.assign(static_cast<std::size_t>(p), 0.0);
  int used = 0;
  for (const auto& out : outcomes) {
    if (out.skipped) {
      ++report.skipped;
      continue;
    }
    ++used;
    for (int k = 0; k < p; ++k) {
      report.coverage[static_cast<std::size_t>(k)] +=
          out.covered[static_cast<std::size_t>(k)];
      report.mean_width[static_cast<std::size_t>(k)] +=
          out.width[static_cast<std::size_t>(k)];
    }
  }
  if (used > 0)
    for (int k = 0; k < p; ++k) {
      report.coverage[static_cast<std::size_t>(k)] /= used;
      report.mean_width[static_cast<std::size_t>(k)] /= used;
    }
  return report;
}

BvmReport run_bvm_pipeline(const SurvivalDataset& ds, const NiiPrior& prior,
                           const BvmPipelineConfig& config) {
  const PartialLikelihood lik(ds);
  const FitResult fit = fit_mle(lik);
  if (!fit.converged)
    throw NumericalError("bvm pipeline: MLE did not converge");
  const CoxPosterior posterior(ds, prior);
  const ChainResult chain = sample_beta_posterior(posterior, fit, config.chain);

  BvmReport report;
  report.n = ds.n();
  report.p = ds.p();
  report.seed = config.chain.seed;
  report.prior = prior.description();
  report.thresholds = config.thresholds;
  report.beta = bvm_beta_check(fit, chain.draws, ds.n(), config.thresholds);

  const LimitFunctionals fn(ds, fit.beta_hat, fit.breslow);
  std::vector<double> grid;
  const double t_max = fn.last_event_time();
  for (int j = 1; j <= config.grid_points; ++j)
    grid.push_back(t_max * j / config.grid_points);

  // Thin the chain to the requested number of joint (beta, A) draws.
  std::vector<Eigen::VectorXd> thinned;
  const int stride = std::max<int>(
      1, static_cast<int>(chain.draws.size()) / std::max(1, config.path_draws));
  for (std::size_t d = 0; d < chain.draws.size() &&
                          static_cast<int>(thinned.size()) < config.path_draws;
       d += static_cast<std::size_t>(stride))
    thinned.push_back(chain.draws[d]);

  report.hazard =
      bvm_A_check(posterior, fit, fn, thinned, config.epsilon, grid,
                  derive_seed(config.chain.seed, 101), config.thresholds);
  return report;
}

}  // namespace levycox

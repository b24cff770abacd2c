#include "levycox/fit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace levycox {

namespace {

std::string describe_violations(const ValidationVerdict& verdict) {
  std::string msg;
  for (const auto& v : verdict.violations) {
    if (!msg.empty()) msg += "; ";
    msg += v.code + ": " + v.message;
  }
  return msg;
}

}  // namespace

PartialLikelihood::PartialLikelihood(const SurvivalDataset& ds) {
  const ValidationVerdict verdict = validate_dataset(ds);
  if (!verdict.passed)
    throw ValidationError("partial likelihood: dataset failed validation (" +
                          describe_violations(verdict) + ")");
  sorted_ = std::make_shared<const detail::SortedData>(ds);
  if (sorted_->q() == 0)
    throw ValidationError(
        "partial likelihood: no uncensored records, likelihood undefined");
  max_l1_ = ds.max_l1_norm();
}

LogLik PartialLikelihood::eval(const Eigen::VectorXd& beta, int order) const {
  const auto& sd = *sorted_;
  const int n = sd.n;
  const int p = sd.p;
  if (beta.size() != p)
    throw ValidationError("partial likelihood: beta has wrong dimension");

  const Eigen::VectorXd scores = sd.risk_scores(beta);

  LogLik out;
  if (order >= 1) out.gradient = Eigen::VectorXd::Zero(p);
  if (order >= 2) out.hessian = Eigen::MatrixXd::Zero(p, p);

  // Backward sweep accumulating suffix sums of e^{beta'Z}, Z e^{beta'Z} and
  // Z Z' e^{beta'Z}; at each event block the risk-set statistics are the
  // current suffix values.
  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);

  int event = sd.q() - 1;
  int k = n - 1;
  const double log_n = std::log(static_cast<double>(n));
  for (int b = sd.blocks() - 1; b >= 0; --b) {
    for (; k >= sd.block_start[static_cast<std::size_t>(b)]; --k) {
      const double w = scores(k);
      s0 += w;
      s1.noalias() += w * sd.z.row(k).transpose();
      if (order >= 2)
        s2.noalias() += w * sd.z.row(k).transpose() * sd.z.row(k);
    }
    if (event >= 0 && sd.event_block[static_cast<std::size_t>(event)] == b) {
      const int begin = sd.event_positions_begin[static_cast<std::size_t>(event)];
      const int deaths = sd.event_death_count[static_cast<std::size_t>(event)];
      for (int d = begin; d < begin + deaths; ++d) {
        out.value += sd.z.row(d).dot(beta) - std::log(s0) + log_n;
        if (order >= 1) out.gradient.noalias() += sd.z.row(d).transpose() - s1 / s0;
        if (order >= 2) {
          const Eigen::VectorXd mean = s1 / s0;
          out.hessian.noalias() -= s2 / s0 - mean * mean.transpose();
        }
      }
      --event;
    }
  }
  return out;
}

FitResult fit_mle(const PartialLikelihood& lik, Eigen::VectorXd init,
                  double tol, int max_iter) {
  const int p = lik.p();
  Eigen::VectorXd beta = init.size() == p ? init : Eigen::VectorXd::Zero(p);
  const double divergence_bound = 50.0 / std::max(lik.max_l1_norm(), 1e-12);

  FitResult result;
  LogLik current = lik.eval(beta, 2);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    result.gradient_norm = current.gradient.lpNorm<Eigen::Infinity>();
    if (result.gradient_norm < tol) {
      result.converged = true;
      break;
    }

    // Newton direction on the concave objective; fall back to the gradient
    // when the (negated) Hessian is numerically singular.
    Eigen::VectorXd direction;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-current.hessian);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
        (ldlt.vectorD().array() > 1e-12 * current.hessian.norm()).all()) {
      direction = ldlt.solve(current.gradient);
    } else {
      direction = current.gradient;
    }

    // Step halving; near the flat top the quadratic gain drops below double
    // resolution, so accept any step that does not lose more than a few ULPs.
    const double slack = 1e-12 * (1.0 + std::abs(current.value));
    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Eigen::VectorXd candidate = beta + step * direction;
      const LogLik trial = lik.eval(candidate, 0);
      if (std::isfinite(trial.value) && trial.value > current.value - slack) {
        beta = candidate;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;  // no ascent left at float resolution

    if (beta.lpNorm<1>() > divergence_bound)
      throw NumericalError(
          "fit_mle: monotone partial likelihood, no finite maximizer "
          "(||beta||_1 exceeded " +
          std::to_string(divergence_bound) + ")");
    current = lik.eval(beta, 2);
  }
  result.gradient_norm = current.gradient.lpNorm<Eigen::Infinity>();
  if (result.gradient_norm < tol) result.converged = true;
  if (!result.converged && beta.lpNorm<1>() > 0.2 * divergence_bound)
    throw NumericalError(
        "fit_mle: monotone partial likelihood suspected, ascent left the "
        "numerically identifiable region without converging");
  if (result.converged && p > 0) {
    // A monotone likelihood saturates: the gradient drops below tol while the
    // curvature decays at the same exponential rate, long before ||beta||
    // reaches the hard bound. A genuine interior maximum keeps curvature on
    // the scale of the data.
    const double z_scale = std::max(lik.max_l1_norm(), 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(-current.hessian);
    if (eigen.eigenvalues().minCoeff() < 100.0 * tol * z_scale * z_scale)
      throw NumericalError(
          "fit_mle: monotone partial likelihood, curvature vanished at the "
          "stationary point (no finite maximizer)");
  }

  result.beta_hat = beta;
  result.info_hat = -current.hessian / static_cast<double>(lik.n());
  result.iterations = iter;
  result.breslow = breslow(lik, beta);
  return result;
}

HazardPath breslow(const PartialLikelihood& lik, const Eigen::VectorXd& beta) {
  const auto& sd = lik.sorted();
  const Eigen::VectorXd scores = sd.risk_scores(beta);
  const std::vector<double> suffix = detail::SortedData::suffix_sums(scores);

  std::vector<double> times;
  std::vector<double> sizes;
  times.reserve(static_cast<std::size_t>(sd.q()));
  sizes.reserve(static_cast<std::size_t>(sd.q()));
  for (int i = 0; i < sd.q(); ++i) {
    const int b = sd.event_block[static_cast<std::size_t>(i)];
    const double risk_sum =
        suffix[static_cast<std::size_t>(sd.block_start[static_cast<std::size_t>(b)])];
    times.push_back(sd.block_time[static_cast<std::size_t>(b)]);
    sizes.push_back(sd.event_death_count[static_cast<std::size_t>(i)] / risk_sum);
  }
  return HazardPath(std::move(times), std::move(sizes));
}

HazardPath breslow(const SurvivalDataset& ds, const Eigen::VectorXd& beta) {
  // Standalone entry point; shares the sorted machinery but skips the
  // no-events restriction (an all-censored dataset has an empty estimator).
  const detail::SortedData sd(ds);
  if (beta.size() != sd.p)
    throw ValidationError("breslow: beta has wrong dimension");
  const Eigen::VectorXd scores = sd.risk_scores(beta);
  const std::vector<double> suffix = detail::SortedData::suffix_sums(scores);
  std::vector<double> times;
  std::vector<double> sizes;
  for (int i = 0; i < sd.q(); ++i) {
    const int b = sd.event_block[static_cast<std::size_t>(i)];
    const double risk_sum =
        suffix[static_cast<std::size_t>(sd.block_start[static_cast<std::size_t>(b)])];
    times.push_back(sd.block_time[static_cast<std::size_t>(b)]);
    sizes.push_back(sd.event_death_count[static_cast<std::size_t>(i)] / risk_sum);
  }
  return HazardPath(std::move(times), std::move(sizes));
}

}  // namespace levycox

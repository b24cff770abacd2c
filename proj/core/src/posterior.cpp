#include "levycox/posterior.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <limits>

#include "levycox/detail/levy_sampler.hpp"

namespace levycox {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest u the density evaluators use; e^{-u} stays a normal double and
// x = 1 - e^{-u} stays strictly below 1 in the arithmetic.
constexpr double kUClamp = 36.7;

std::string describe_violations(const ValidationVerdict& verdict) {
  std::string msg;
  for (const auto& v : verdict.violations) {
    if (!msg.empty()) msg += "; ";
    msg += v.code + ": " + v.message;
  }
  return msg;
}

// Integrand of the jump integrals in the u = -log(1-x) coordinate:
//   x^{k-1} prod_j (1 - e^{-u a_j}) e^{-u S} g_u(t, u) e^{-u}.
struct JumpIntegrand {
  const NiiPrior& prior;
  double t;
  const std::vector<double>& death_scores;
  double exponent;  // S: risk-score sum tilting the measure
  int k;

  double operator()(double u) const {
    u = std::max(u, 1e-300);
    const double x = -std::expm1(-u);
    double value = std::exp(-u * (exponent + 1.0)) * prior.g_u(t, u);
    for (double a : death_scores) value *= -std::expm1(-u * a);
    if (k == 0)
      value /= x;
    else if (k > 1)
      value *= std::pow(x, k - 1);
    return value;
  }
};

double jump_integral_cap(const NiiPrior& prior, double exponent) {
  const double d = exponent + prior.varsigma();
  const double tail_tol = 1e-17;
  const double cap =
      std::log(std::max(prior.g_star(), 1.0) * 4.0 / (d * tail_tol)) / d;
  return std::min(cap, 745.0 / d);
}

std::vector<double> jump_integral_breaks(double u_cap, double exponent) {
  std::vector<double> breaks;
  // Chebyshev-spaced points of the unit jump interval mapped into u: dense
  // near both endpoints of [0,1].
  for (int j = 1; j < 12; ++j) {
    const double x = 0.5 * (1.0 - std::cos(kPi * j / 12.0));
    const double u = -std::log1p(-x);
    if (u < u_cap) breaks.push_back(u);
  }
  // The boundary layer where the tilted mass lives, at u ~ 1/S.
  if (exponent > 8.0) {
    for (double f : {0.25, 1.0, 4.0}) {
      const double u = f / (exponent + 1.0);
      if (u < u_cap) breaks.push_back(u);
    }
  }
  // Dyadic tail coverage beyond the Chebyshev range.
  for (double u = 8.0; u < u_cap; u *= 2.0) breaks.push_back(u);
  return breaks;
}

QuadResult jump_integral_adaptive(const NiiPrior& prior, double t,
                                  const std::vector<double>& death_scores,
                                  double exponent, int k, bool keep_panels) {
  const double u_cap = jump_integral_cap(prior, exponent);
  QuadOptions opt;
  opt.abs_tol = 1e-16;
  opt.rel_tol = 1e-11;
  JumpIntegrand f{prior, t, death_scores, exponent, k};
  return integrate_adaptive(f, 0.0, u_cap, opt,
                            jump_integral_breaks(u_cap, exponent), keep_panels);
}

double jump_integral(const NiiPrior& prior, double t,
                     const std::vector<double>& death_scores, double exponent,
                     int k) {
  return jump_integral_adaptive(prior, t, death_scores, exponent, k, false).value;
}

// Closed forms for beta-process priors, g_t = c (1-x)^{c-1}. With v = 1-x
// and b = S + c:
//   integral prod_j (1-v^{a_j}) v^{b-1}/(1-v) dv
//     = sum_{J nonempty} (-1)^{|J|+1} (digamma(b + A_J) - digamma(b)),
//   integral (1-v)^{k-1} prod_j (1-v^{a_j}) v^{b-1} dv
//     = sum_J sum_m (-1)^{|J|+m} C(k-1,m) / (b + A_J + m).
double beta_jump_normalizer(double c, const std::vector<double>& death_scores,
                            double exponent) {
  const double b = exponent + c;
  const double psi_b = boost::math::digamma(b);
  const std::size_t m = death_scores.size();
  double total = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    double sum = 0.0;
    int bits = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (mask & (std::size_t{1} << j)) {
        sum += death_scores[j];
        ++bits;
      }
    const double term = boost::math::digamma(b + sum) - psi_b;
    total += (bits % 2 == 1 ? term : -term);
  }
  return c * total;
}

}  // namespace

CoefficientPrior CoefficientPrior::gaussian(int p, double scale) {
  if (!(scale > 0.0))
    throw ConfigError("coefficient prior: scale must be positive");
  const double log_norm =
      -0.5 * p * std::log(2.0 * kPi * scale * scale);
  return CoefficientPrior{
      [scale, log_norm](const Eigen::VectorXd& beta) {
        return log_norm - 0.5 * beta.squaredNorm() / (scale * scale);
      },
      "gaussian(scale=" + std::to_string(scale) + ")"};
}

struct CoxPosterior::BetaState {
  Eigen::VectorXd scores;       // sorted order
  std::vector<double> suffix;   // suffix sums, suffix[n] = 0
};

CoxPosterior::CoxPosterior(const SurvivalDataset& ds, NiiPrior prior,
                           CoefficientPrior coef_prior, Options options)
    : sorted_(ds),
      prior_(std::move(prior)),
      coef_prior_(std::move(coef_prior)),
      options_(options) {
  if (!options_.skip_validation) {
    const ValidationVerdict verdict = validate_dataset(ds);
    if (!verdict.passed)
      throw ValidationError("posterior: dataset failed validation (" +
                            describe_violations(verdict) + ")");
  }
  if (prior_.tau() < ds.tau() * (1.0 - 1e-12))
    throw ConfigError("posterior: prior horizon shorter than the data horizon");
  if (!coef_prior_.log_density)
    throw ConfigError("posterior: coefficient prior has no density");
}

CoxPosterior::CoxPosterior(const SurvivalDataset& ds, NiiPrior prior,
                           CoefficientPrior coef_prior)
    : CoxPosterior(ds, std::move(prior), std::move(coef_prior), Options{}) {}

CoxPosterior::CoxPosterior(const SurvivalDataset& ds, NiiPrior prior)
    : CoxPosterior(ds, std::move(prior), CoefficientPrior::gaussian(ds.p()),
                   Options{}) {}

bool CoxPosterior::analytic() const {
  return prior_.beta_concentration().has_value() && !options_.force_quadrature;
}

CoxPosterior::BetaState CoxPosterior::state(const Eigen::VectorXd& beta) const {
  if (beta.size() != sorted_.p)
    throw ValidationError("posterior: beta has wrong dimension");
  BetaState st;
  st.scores = sorted_.risk_scores(beta);
  st.suffix = detail::SortedData::suffix_sums(st.scores);
  return st;
}

double CoxPosterior::rho_impl(const BetaState& st) const {
  const auto& sd = sorted_;
  if (sd.n == 0) return 0.0;

  // Segments of [0, tau] on which the prior's rate and jump density are both
  // constant; each block's time integral splits exactly across them.
  std::vector<double> seg_edges = prior_.segment_breaks(sd.tau);
  seg_edges.push_back(sd.tau);

  const bool homogeneous = prior_.family().piecewise_homogeneous();
  const auto* beta_c = analytic() ? &*prior_.beta_concentration() : nullptr;

  double total = 0.0;
  for (int b = 0; b < sd.blocks(); ++b) {
    const int start = sd.block_start[static_cast<std::size_t>(b)];
    const int end = sd.block_end(b);
    const double t_block = sd.block_time[static_cast<std::size_t>(b)];
    // Equal-time records telescope: their joint contribution tilts the
    // measure by the suffix past the block and spends the block's total
    // score, independent of the order within the block.
    const double block_score = st.suffix[static_cast<std::size_t>(start)] -
                               st.suffix[static_cast<std::size_t>(end)];
    const double after_score = st.suffix[static_cast<std::size_t>(end)];

    if (!homogeneous) {
      QuadOptions opt;
      opt.abs_tol = 1e-12;
      opt.rel_tol = 1e-9;
      const std::vector<double> one_score{block_score};
      total += integrate(
          [&](double t) {
            return prior_.rate()(t) *
                   jump_integral(prior_, t, one_score, after_score, 0);
          },
          0.0, t_block, opt);
      continue;
    }

    double left = 0.0;
    for (double right : seg_edges) {
      const double upto = std::min(right, t_block);
      if (upto <= left) break;
      const double len = upto - left;
      const double rep = 0.5 * (left + upto);
      const double lambda_val = prior_.rate()(rep);
      double inner;
      if (beta_c) {
        const double c = (*beta_c)(rep);
        inner = c * (boost::math::digamma(after_score + block_score + c) -
                     boost::math::digamma(after_score + c));
      } else {
        inner = jump_integral(prior_, rep, {block_score}, after_score, 0);
      }
      total += lambda_val * len * inner;
      left = right;
    }
  }
  return total;
}

double CoxPosterior::rho(const Eigen::VectorXd& beta) const {
  return rho_impl(state(beta));
}

double CoxPosterior::log_jump_normalizer(int event, const BetaState& st) const {
  const auto& sd = sorted_;
  const int b = sd.event_block[static_cast<std::size_t>(event)];
  const int start = sd.block_start[static_cast<std::size_t>(b)];
  const int dbegin = sd.event_positions_begin[static_cast<std::size_t>(event)];
  const int dcount = sd.event_death_count[static_cast<std::size_t>(event)];

  std::vector<double> death_scores;
  death_scores.reserve(static_cast<std::size_t>(dcount));
  double death_sum = 0.0;
  for (int d = dbegin; d < dbegin + dcount; ++d) {
    death_scores.push_back(st.scores(d));
    death_sum += st.scores(d);
  }
  const double reduced = st.suffix[static_cast<std::size_t>(start)] - death_sum;
  const double t = sd.block_time[static_cast<std::size_t>(b)];

  double z;
  if (analytic()) {
    z = beta_jump_normalizer((*prior_.beta_concentration())(t), death_scores,
                             reduced);
  } else {
    z = jump_integral(prior_, t, death_scores, reduced, 0);
  }
  if (!(z > 0.0) || !std::isfinite(z))
    throw NumericalError("posterior: jump normalizer at event " +
                         std::to_string(event) + " is not positive finite");
  return std::log(z);
}

double CoxPosterior::log_marginal(const Eigen::VectorXd& beta) const {
  const double log_prior = coef_prior_.log_density(beta);
  if (std::isnan(log_prior) || log_prior == std::numeric_limits<double>::infinity())
    throw NumericalError("posterior: coefficient prior density is not finite");
  if (log_prior == -std::numeric_limits<double>::infinity())
    return log_prior;

  const BetaState st = state(beta);
  double value = -rho_impl(st) + log_prior;
  const double log_n = std::log(static_cast<double>(std::max(sorted_.n, 1)));
  for (int i = 0; i < sorted_.q(); ++i) {
    const double t = sorted_.event_time(i);
    value += log_n + std::log(prior_.rate()(t)) + log_jump_normalizer(i, st);
  }
  return value;
}

JumpDistribution CoxPosterior::jump_distribution(
    int event, const Eigen::VectorXd& beta) const {
  if (event < 0 || event >= sorted_.q())
    throw ValidationError("jump_distribution: event index out of range");
  const BetaState st = state(beta);
  const auto& sd = sorted_;
  const int b = sd.event_block[static_cast<std::size_t>(event)];
  const int start = sd.block_start[static_cast<std::size_t>(b)];
  const int dbegin = sd.event_positions_begin[static_cast<std::size_t>(event)];
  const int dcount = sd.event_death_count[static_cast<std::size_t>(event)];

  JumpDistribution jd(prior_);
  jd.event_index_ = event;
  jd.t_ = sd.block_time[static_cast<std::size_t>(b)];
  double death_sum = 0.0;
  for (int d = dbegin; d < dbegin + dcount; ++d) {
    jd.death_scores_.push_back(st.scores(d));
    death_sum += st.scores(d);
  }
  jd.reduced_risk_sum_ = st.suffix[static_cast<std::size_t>(start)] - death_sum;

  QuadResult qr;
  try {
    qr = jump_integral_adaptive(prior_, jd.t_, jd.death_scores_,
                                jd.reduced_risk_sum_, 0, true);
  } catch (const NumericalError& e) {
    throw NumericalError("jump_distribution at event " + std::to_string(event) +
                         ": " + e.what());
  }
  jd.normalizer_ = qr.value;
  if (!(jd.normalizer_ > 0.0) || !std::isfinite(jd.normalizer_))
    throw NumericalError("jump_distribution at event " + std::to_string(event) +
                         ": normalizer is not positive finite");

  // CDF table on the refined integration grid, slopes from the exact density.
  JumpIntegrand f{jd.prior_, jd.t_, jd.death_scores_, jd.reduced_risk_sum_, 0};
  std::vector<double> us;
  std::vector<double> cdf;
  std::vector<double> slopes;
  us.reserve(qr.panels.size() + 1);
  cdf.reserve(qr.panels.size() + 1);
  us.push_back(qr.panels.front().a);
  cdf.push_back(0.0);
  double running = 0.0;
  for (const auto& panel : qr.panels) {
    running += std::max(panel.value, 0.0);
    us.push_back(panel.b);
    cdf.push_back(running);
  }
  const double total = cdf.back();
  for (double& y : cdf) y /= total;
  slopes.reserve(us.size());
  for (double u : us) slopes.push_back(f(u) / total);
  jd.cdf_table_ = MonotoneCubic(std::move(us), std::move(cdf), &slopes);
  return jd;
}

double JumpDistribution::unnormalized_density(double x) const {
  if (!(x >= 0.0) || x > 1.0)
    throw ValidationError("jump density: x must lie in [0,1]");
  const double u = std::min(std::max(-std::log1p(-x), 1e-300), kUClamp);
  const double x_eff = -std::expm1(-u);
  double value = std::exp(-u * reduced_risk_sum_) * prior_.g_u(t_, u);
  for (double a : death_scores_) value *= -std::expm1(-u * a);
  // Density in x: 1/x factor only (the e^{-u} Jacobian belongs to du).
  return value / x_eff;
}

double JumpDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return cdf_table_.eval(-std::log1p(-x));
}

double JumpDistribution::quantile(double pr) const {
  pr = std::clamp(pr, 0.0, 1.0);
  return -std::expm1(-cdf_table_.solve(pr));
}

double JumpDistribution::moment(int k) const {
  if (k <= 0) throw ValidationError("jump moment: k must be a positive integer");
  return jump_integral(prior_, t_, death_scores_, reduced_risk_sum_, k) /
         normalizer_;
}

double CoxPosterior::jump_moment(int event, const Eigen::VectorXd& beta, int k,
                                 JumpMomentMode mode) const {
  if (k <= 0) throw ValidationError("jump_moment: k must be a positive integer");
  if (event < 0 || event >= sorted_.q())
    throw ValidationError("jump_moment: event index out of range");
  const BetaState st = state(beta);
  const auto& sd = sorted_;
  const int b = sd.event_block[static_cast<std::size_t>(event)];
  const int start = sd.block_start[static_cast<std::size_t>(b)];

  if (mode == JumpMomentMode::GammaRatio) {
    const double risk_sum = st.suffix[static_cast<std::size_t>(start)];
    double value = 1.0;
    for (int j = 1; j <= k; ++j) value *= j / (risk_sum + j);
    return value;
  }

  const int dbegin = sd.event_positions_begin[static_cast<std::size_t>(event)];
  const int dcount = sd.event_death_count[static_cast<std::size_t>(event)];
  std::vector<double> death_scores;
  double death_sum = 0.0;
  for (int d = dbegin; d < dbegin + dcount; ++d) {
    death_scores.push_back(st.scores(d));
    death_sum += st.scores(d);
  }
  const double reduced = st.suffix[static_cast<std::size_t>(start)] - death_sum;
  const double t = sd.block_time[static_cast<std::size_t>(b)];
  return jump_integral(prior_, t, death_scores, reduced, k) /
         jump_integral(prior_, t, death_scores, reduced, 0);
}

double CoxPosterior::sample_jump(int event, const Eigen::VectorXd& beta,
                                 std::uint64_t seed) const {
  const JumpDistribution jd = jump_distribution(event, beta);
  Rng rng(seed);
  return jd.sample(rng);
}

namespace {

// Mass below eps of the tilted jump density: integral_0^eps (1-x)^S g_t(x) dx.
double tilted_small_mass(const NiiPrior& prior,
                         const PiecewiseConstant* beta_c, double t, double S,
                         double eps) {
  if (beta_c) {
    const double c = (*beta_c)(t);
    return c * (-std::expm1((S + c) * std::log1p(-eps))) / (S + c);
  }
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-10;
  return integrate(
      [&](double x) {
        return std::exp(S * std::log1p(-x)) * prior.g(t, x);
      },
      0.0, eps, opt);
}

// Full first moment of the tilted measure per unit rate:
// integral_0^1 x (1-x)^S g_t(x)/x dx.
double tilted_unit_mean(const NiiPrior& prior, const PiecewiseConstant* beta_c,
                        double t, double S) {
  if (beta_c) {
    const double c = (*beta_c)(t);
    return c / (S + c);
  }
  return jump_integral(prior, t, {}, S, 1);
}

}  // namespace

double CoxPosterior::path_compensation(const Eigen::VectorXd& beta,
                                       double epsilon, double t) const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("path_compensation: epsilon must lie in (0,1)");
  const BetaState st = state(beta);
  const auto* beta_c = analytic() ? &*prior_.beta_concentration() : nullptr;
  t = std::min(t, sorted_.tau);

  std::vector<double> edges = prior_.segment_breaks(t);
  for (double bt : sorted_.block_time)
    if (bt < t) edges.push_back(bt);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.push_back(t);

  auto risk_sum_at = [&](double time) {
    const auto it =
        std::lower_bound(sorted_.time.begin(), sorted_.time.end(), time);
    return st.suffix[static_cast<std::size_t>(it - sorted_.time.begin())];
  };

  double total = 0.0;
  double left = 0.0;
  for (double right : edges) {
    if (right <= left) continue;
    const double mid = 0.5 * (left + right);
    total += prior_.rate()(mid) *
             tilted_small_mass(prior_, beta_c, mid, risk_sum_at(mid), epsilon) *
             (right - left);
    left = right;
  }
  return total;
}

double CoxPosterior::continuous_mean(const Eigen::VectorXd& beta) const {
  const BetaState st = state(beta);
  const auto* beta_c = analytic() ? &*prior_.beta_concentration() : nullptr;
  const double tau = sorted_.tau;

  std::vector<double> edges = prior_.segment_breaks(tau);
  for (double bt : sorted_.block_time)
    if (bt < tau) edges.push_back(bt);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.push_back(tau);

  auto risk_sum_at = [&](double time) {
    const auto it =
        std::lower_bound(sorted_.time.begin(), sorted_.time.end(), time);
    return st.suffix[static_cast<std::size_t>(it - sorted_.time.begin())];
  };

  double total = 0.0;
  double left = 0.0;
  for (double right : edges) {
    if (right <= left) continue;
    const double mid = 0.5 * (left + right);
    total += prior_.rate()(mid) *
             tilted_unit_mean(prior_, beta_c, mid, risk_sum_at(mid)) *
             (right - left);
    left = right;
  }
  return total;
}

HazardPath CoxPosterior::sample_path(const Eigen::VectorXd& beta,
                                     double epsilon, std::uint64_t seed) const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("sample_path: epsilon must lie in (0,1)");
  const BetaState st = state(beta);
  const auto& sd = sorted_;
  const double tau = sd.tau;
  Rng rng(seed);
  const auto* beta_c = analytic() ? &*prior_.beta_concentration() : nullptr;

  auto risk_sum_at = [&](double time) {
    const auto it = std::lower_bound(sd.time.begin(), sd.time.end(), time);
    return st.suffix[static_cast<std::size_t>(it - sd.time.begin())];
  };

  // Fixed jumps at the event times. Beta-family singleton deaths use exact
  // rejection against a Beta(1, S+c) proposal (same law as the tabulated
  // route, constant cost); everything else builds the tabulated CDF.
  std::vector<double> fixed_times;
  std::vector<double> fixed_sizes;
  fixed_times.reserve(static_cast<std::size_t>(sd.q()));
  fixed_sizes.reserve(static_cast<std::size_t>(sd.q()));
  for (int i = 0; i < sd.q(); ++i) {
    const int b = sd.event_block[static_cast<std::size_t>(i)];
    const int start = sd.block_start[static_cast<std::size_t>(b)];
    const int dbegin = sd.event_positions_begin[static_cast<std::size_t>(i)];
    const int dcount = sd.event_death_count[static_cast<std::size_t>(i)];
    const double t = sd.block_time[static_cast<std::size_t>(b)];

    double x;
    if (beta_c && dcount == 1) {
      const double a = st.scores(dbegin);
      const double reduced =
          st.suffix[static_cast<std::size_t>(start)] - a;
      const double c = (*beta_c)(t);
      const double shape = reduced + c;
      const double bound = std::max(a, 1.0);
      while (true) {
        const double log_omx = std::log(rng.uniform_pos()) / shape;
        const double cand = -std::expm1(log_omx);
        const double phi =
            cand > 0.0 ? -std::expm1(a * log_omx) / cand : a;
        if (rng.uniform() * bound <= phi) {
          x = cand;
          break;
        }
      }
    } else {
      x = jump_distribution(i, beta).sample(rng);
    }
    fixed_times.push_back(t);
    fixed_sizes.push_back(x);
  }

  // Continuous component: prior Levy measure tilted by (1-x)^{risk sum}.
  auto poisson_jumps = detail::sample_levy_jumps(
      prior_, tau, epsilon, rng, [&](double t, double, double u) {
        return std::exp(-u * risk_sum_at(t));
      });

  // Small-jump compensation binned between observed times (the risk sum is
  // constant there); past the last observation the tilt vanishes, so that
  // stretch gets its own refinement.
  std::vector<double> edges = prior_.segment_breaks(tau);
  for (double bt : sd.block_time)
    if (bt < tau) edges.push_back(bt);
  const double last_time = sd.n > 0 ? sd.time.back() : 0.0;
  if (tau > last_time) {
    const int cells = 64;
    for (int j = 1; j < cells; ++j) {
      const double t = last_time + (tau - last_time) * j / cells;
      edges.push_back(t);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.push_back(tau);

  std::vector<double> drift_times;
  std::vector<double> drift_sizes;
  drift_times.reserve(edges.size());
  drift_sizes.reserve(edges.size());
  double left = 0.0;
  for (double right : edges) {
    if (right <= left) continue;
    const double mid = 0.5 * (left + right);
    const double mass =
        prior_.rate()(mid) *
        tilted_small_mass(prior_, beta_c, mid, risk_sum_at(mid), epsilon) *
        (right - left);
    drift_times.push_back(right);
    drift_sizes.push_back(mass);
    left = right;
  }

  // Merge the three sorted jump streams.
  std::vector<double> times;
  std::vector<double> sizes;
  times.reserve(fixed_times.size() + poisson_jumps.size() + drift_times.size());
  sizes.reserve(times.capacity());
  std::size_t fi = 0, pi = 0, di = 0;
  while (fi < fixed_times.size() || pi < poisson_jumps.size() ||
         di < drift_times.size()) {
    const double tf = fi < fixed_times.size()
                          ? fixed_times[fi]
                          : std::numeric_limits<double>::infinity();
    const double tp = pi < poisson_jumps.size()
                          ? poisson_jumps[pi].t
                          : std::numeric_limits<double>::infinity();
    const double td = di < drift_times.size()
                          ? drift_times[di]
                          : std::numeric_limits<double>::infinity();
    if (tf <= tp && tf <= td) {
      times.push_back(tf);
      sizes.push_back(fixed_sizes[fi++]);
    } else if (tp <= td) {
      times.push_back(tp);
      sizes.push_back(poisson_jumps[pi++].x);
    } else {
      times.push_back(td);
      sizes.push_back(drift_sizes[di++]);
    }
  }
  return HazardPath(std::move(times), std::move(sizes));
}

ChainResult sample_beta_posterior(const CoxPosterior& posterior,
                                  const FitResult& fit,
                                  const ChainConfig& config) {
  if (config.draws < 1)
    throw ConfigError("sample_beta_posterior: need at least one draw");
  if (config.burn_in < 0)
    throw ConfigError("sample_beta_posterior: burn_in must be >= 0");
  const int p = posterior.p();
  if (fit.beta_hat.size() != p)
    throw ValidationError("sample_beta_posterior: fit does not match dataset");

  // Proposal covariance (2.38^2/p) * info_hat^{-1} / n via Cholesky.
  Eigen::MatrixXd cov =
      fit.info_hat.inverse() * (2.38 * 2.38 / std::max(p, 1)) /
      static_cast<double>(posterior.n());
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success || !cov.allFinite())
    throw NumericalError(
        "sample_beta_posterior: degenerate proposal covariance");
  const Eigen::MatrixXd scale = llt.matrixL();

  Rng rng(config.seed);
  Eigen::VectorXd current = fit.beta_hat;
  double current_lp = posterior.log_marginal(current);
  if (!std::isfinite(current_lp))
    throw NumericalError(
        "sample_beta_posterior: log posterior not finite at the MLE");

  ChainResult result;
  result.draws.reserve(static_cast<std::size_t>(config.draws));
  long accepted = 0;
  const long total = static_cast<long>(config.draws) + config.burn_in;
  Eigen::VectorXd z(p);
  for (long step = 0; step < total; ++step) {
    for (int k = 0; k < p; ++k) z(k) = rng.normal();
    const Eigen::VectorXd proposal = current + scale * z;
    const double proposal_lp = posterior.log_marginal(proposal);
    if (std::log(rng.uniform_pos()) < proposal_lp - current_lp) {
      current = proposal;
      current_lp = proposal_lp;
      ++accepted;
    }
    if (step >= config.burn_in) result.draws.push_back(current);
  }
  result.acceptance_rate = static_cast<double>(accepted) / total;
  return result;
}

}  // namespace levycox

#include "levycox/prior.hpp"

#include <cmath>
#include <limits>

#include "levycox/detail/levy_sampler.hpp"
#include "levycox/quadrature.hpp"
#include "levycox/rng.hpp"

namespace levycox {

namespace {

// (-expm1(-u))/u, the x/(-log(1-x)) factor of the gamma family in the
// u-coordinate; -> 1 as u -> 0.
double x_over_u(double u) {
  if (u == 0.0) return 1.0;
  return -std::expm1(-u) / u;
}

// Geometric breakpoints to seed adaptive panels on [0, cap]: the integrands
// here decay exponentially, so dyadic spacing keeps every scale resolved.
std::vector<double> dyadic_breaks(double cap) {
  std::vector<double> breaks;
  for (double b = cap / 2; b > 1e-6 * cap; b /= 2) breaks.push_back(b);
  return breaks;
}

}  // namespace

double BetaJumpFamily::g(double t, double x) const {
  const double c = c_(t);
  return c * std::pow(1.0 - x, c - 1.0);
}

double BetaJumpFamily::g_u(double t, double u) const {
  const double c = c_(t);
  return c * std::exp(-u * (c - 1.0));
}

double GammaJumpFamily::g(double t, double x) const {
  const double c = c_(t);
  const double ct = ctilde(t);
  if (x <= 0.0) return ct;
  if (x >= 1.0) {
    // (1-x)^{c-1} against 1/(-log(1-x)): the power wins for c < 1.
    return c < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return ct * x / (-std::log1p(-x)) * std::pow(1.0 - x, c - 1.0);
}

double GammaJumpFamily::g_u(double t, double u) const {
  const double c = c_(t);
  return ctilde(t) * x_over_u(u) * std::exp(-u * (c - 1.0));
}

double GenericJumpFamily::g_u(double t, double u) const {
  return fn_(t, -std::expm1(-u));
}

NiiPrior::NiiPrior(PiecewiseConstant lambda,
                   std::shared_ptr<const JumpFamily> family, double varsigma,
                   double g_star, std::function<double(double)> k,
                   double k_lower, double k_upper, double alpha, double tau,
                   std::string description)
    : lambda_(std::move(lambda)),
      family_(std::move(family)),
      varsigma_(varsigma),
      g_star_(g_star),
      k_(std::move(k)),
      k_lower_(k_lower),
      k_upper_(k_upper),
      alpha_(alpha),
      tau_(tau),
      description_(std::move(description)) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_))
    throw ConfigError("prior: tau must be positive and finite");
  if (!(lambda_.min_value() > 0.0))
    throw ConfigError("prior: rate function must be strictly positive");
  if (!(varsigma_ > 0.0))
    throw ConfigError("prior: varsigma must be positive");
  if (!(g_star_ > 0.0) || !std::isfinite(g_star_))
    throw ConfigError("prior: g_star must be positive and finite");
  if (!(k_lower_ > 0.0) || !(k_upper_ >= k_lower_) || !std::isfinite(k_upper_))
    throw ConfigError("prior: k bounds must satisfy 0 < k_lower <= k_upper < inf");
  if (!family_) throw ConfigError("prior: missing jump-size family");
}

double NiiPrior::levy_density(double t, double x) const {
  if (!(x > 0.0))
    throw ValidationError("levy_density: jump size must be positive (density diverges at 0)");
  if (x > 1.0)
    throw ValidationError("levy_density: jump size must lie in (0,1]");
  return g(t, x) * lambda_(t) / x;
}

double NiiPrior::g_first_moment(double t) const {
  if (beta_concentration_) return 1.0 / (1.0 + (*beta_concentration_)(t));
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-11;
  // integral x g_t(x) dx = integral (-expm1(-u)) g_u(t,u) e^{-u} du.
  const double cap = 746.0 / std::min(1.0, varsigma_);
  return integrate(
      [&](double u) { return -std::expm1(-u) * g_u(t, u) * std::exp(-u); },
      0.0, cap, opt, dyadic_breaks(cap));
}

double NiiPrior::small_jump_mass(double t, double eps) const {
  if (beta_concentration_) {
    const double c = (*beta_concentration_)(t);
    return -std::expm1(c * std::log1p(-eps));
  }
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-11;
  return integrate([&](double x) { return g(t, x); }, 0.0, eps, opt);
}

std::vector<double> NiiPrior::segment_breaks(double horizon) const {
  std::vector<double> out;
  for (double b : lambda_.breaks())
    if (b > 0.0 && b < horizon) out.push_back(b);
  for (double b : family_->time_breaks())
    if (b > 0.0 && b < horizon) out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PriorMoments NiiPrior::moments(double t) const {
  PriorMoments out;
  t = std::min(t, tau_);
  if (t <= 0.0) return out;
  out.mean = lambda_.integral(0.0, t);
  if (family_->piecewise_homogeneous()) {
    std::vector<double> cuts = segment_breaks(t);
    cuts.push_back(t);
    double left = 0.0;
    for (double right : cuts) {
      const double mid = 0.5 * (left + right);
      out.variance += lambda_(mid) * g_first_moment(mid) * (right - left);
      left = right;
    }
  } else {
    QuadOptions opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-9;
    out.variance = integrate(
        [&](double s) { return lambda_(s) * g_first_moment(s); }, 0.0, t, opt);
  }
  return out;
}

ConditionReport NiiPrior::check_conditions(int grid_resolution) const {
  ConditionReport report;
  const int res = std::max(grid_resolution, 8);

  std::vector<double> t_grid;
  for (int j = 0; j <= res; ++j)
    t_grid.push_back(tau_ * static_cast<double>(j) / res);
  for (double b : segment_breaks(tau_)) {
    t_grid.push_back(std::nextafter(b, 0.0));
    t_grid.push_back(b);
  }

  // Envelope functional (1-x)^{1-varsigma} g_t(x) = g_u(t,u) e^{-u(1-varsigma)}
  // probed on a grid covering both endpoints (u geometric towards 0 and inf).
  std::vector<double> u_grid;
  u_grid.push_back(0.0);
  const double u_cap = 746.0 / std::min(1.0, varsigma_);
  for (double u = 1e-8; u < u_cap; u *= 1.8) u_grid.push_back(u);

  double env_sup = 0.0;
  bool k_ok = true;
  for (double t : t_grid) {
    for (double u : u_grid) {
      const double w = g_u(t, u) * std::exp(-u * (1.0 - varsigma_));
      if (std::isnan(w)) continue;
      env_sup = std::max(env_sup, w);
    }
    const double kt = k_(t);
    if (!(kt >= k_lower_ - 1e-12) || !(kt <= k_upper_ + 1e-12)) k_ok = false;
  }
  report.envelope_sup = env_sup;
  report.envelope_ok =
      std::isfinite(env_sup) && env_sup <= g_star_ * (1.0 + 1e-9);

  double holder_sup = 0.0;
  for (double t : t_grid) {
    const double kt = k_(t);
    for (double h = 1e-7; h < 0.05; h *= 2.0) {
      const double quotient = std::abs(g(t, h) - kt) / std::pow(h, alpha_);
      if (std::isfinite(quotient)) holder_sup = std::max(holder_sup, quotient);
      else holder_sup = quotient;
    }
  }
  report.holder_sup = holder_sup;
  report.holder_ok = std::isfinite(holder_sup);
  report.k_bounds_ok = k_ok;
  return report;
}

NiiPrior beta_process_prior(PiecewiseConstant c, PiecewiseConstant lambda,
                            double tau) {
  if (!(c.min_value() > 0.0) || !std::isfinite(c.max_value()))
    throw ConfigError("beta process prior: need 0 < inf c <= sup c < inf");
  const double sigma = c.min_value();
  const double g_star = c.max_value();
  auto family = std::make_shared<BetaJumpFamily>(c);
  NiiPrior prior(std::move(lambda), family, sigma, g_star,
                 [c](double t) { return c(t); }, c.min_value(), c.max_value(),
                 1.0, tau, "beta process");
  prior.beta_concentration_ = family->concentration();
  return prior;
}

NiiPrior gamma_process_prior(PiecewiseConstant c, PiecewiseConstant lambda,
                             double tau) {
  if (!(c.min_value() > 0.0) || !std::isfinite(c.max_value()))
    throw ConfigError("gamma process prior: need 0 < inf c <= sup c < inf");

  // Normalizer of x/(-log(1-x)) (1-x)^{c-1} per piece of c, as a u-integral
  // integral_0^inf (-expm1(-u))/u e^{-u c} du.
  std::vector<double> ctilde;
  ctilde.reserve(c.values().size());
  QuadOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-12;
  for (double cp : c.values()) {
    const double cap = 746.0 / std::min(1.0, cp);
    const double integral =
        integrate([&](double u) { return x_over_u(u) * std::exp(-u * cp); },
                  0.0, cap, opt, dyadic_breaks(cap));
    ctilde.push_back(1.0 / integral);
  }

  auto family = std::make_shared<GammaJumpFamily>(c, ctilde);
  const double sigma = 0.5 * c.min_value() * (1.0 - 1e-6);
  const double g_star =
      *std::max_element(ctilde.begin(), ctilde.end());  // attained as x -> 0
  const double k_lower = *std::min_element(ctilde.begin(), ctilde.end());

  // Rate of the transformed mean measure (c/ctilde) lambda, reported for
  // reference; the prior itself keeps `lambda` so that E A(t) = Lambda(t).
  std::vector<double> breaks = merged_breaks(c, lambda, tau);
  std::vector<double> tilde_values;
  double left = 0.0;
  for (std::size_t k = 0; k <= breaks.size(); ++k) {
    const double right = k < breaks.size() ? breaks[k] : tau;
    const double mid = 0.5 * (left + right);
    tilde_values.push_back(c(mid) / family->ctilde(mid) * lambda(mid));
    left = right;
  }

  NiiPrior prior(std::move(lambda), family, sigma, g_star,
                 [family](double t) { return family->ctilde(t); }, k_lower,
                 g_star, 1.0, tau, "gamma process");
  prior.gamma_rate_tilde_ = PiecewiseConstant(breaks, tilde_values);
  return prior;
}

double small_jump_compensation(const NiiPrior& prior, double epsilon,
                               double t) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("small_jump_compensation: epsilon must lie in (0,1)");
  t = std::min(t, prior.tau());
  if (t <= 0.0) return 0.0;
  if (prior.family().piecewise_homogeneous()) {
    std::vector<double> cuts = prior.segment_breaks(t);
    cuts.push_back(t);
    double total = 0.0;
    double left = 0.0;
    for (double right : cuts) {
      const double mid = 0.5 * (left + right);
      total += prior.rate()(mid) * prior.small_jump_mass(mid, epsilon) *
               (right - left);
      left = right;
    }
    return total;
  }
  QuadOptions opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-9;
  return integrate(
      [&](double s) {
        return prior.rate()(s) * prior.small_jump_mass(s, epsilon);
      },
      0.0, t, opt);
}

HazardPath sample_prior_path(const NiiPrior& prior, double epsilon,
                             std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("sample_prior_path: epsilon must lie in (0,1)");
  Rng rng(seed);
  const double tau = prior.tau();

  auto jumps = detail::sample_levy_jumps(
      prior, tau, epsilon, rng, [](double, double, double) { return 1.0; });

  // Mean compensation for the suppressed jumps below epsilon, binned onto a
  // grid refined past the prior's own breakpoints. Each cell's mass lands on
  // its right endpoint, so the path total matches the exact compensation.
  std::vector<double> cuts = prior.segment_breaks(tau);
  const int cells = 256;
  for (int j = 1; j < cells; ++j) cuts.push_back(tau * j / cells);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(tau);

  std::vector<double> times;
  std::vector<double> sizes;
  times.reserve(jumps.size() + cuts.size());
  sizes.reserve(jumps.size() + cuts.size());

  // One small-jump mass per prior piece (cells never straddle pieces).
  const std::vector<double> piece_breaks = prior.segment_breaks(tau);
  std::vector<double> piece_mass(piece_breaks.size() + 1,
                                 std::numeric_limits<double>::quiet_NaN());
  auto small_mass_at = [&](double t) {
    if (!prior.family().piecewise_homogeneous())
      return prior.small_jump_mass(t, epsilon);  // midpoint rule per cell
    const std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(piece_breaks.begin(), piece_breaks.end(), t) -
        piece_breaks.begin());
    if (std::isnan(piece_mass[idx]))
      piece_mass[idx] = prior.small_jump_mass(t, epsilon);
    return piece_mass[idx];
  };

  std::size_t jump_pos = 0;
  double left = 0.0;
  for (double right : cuts) {
    while (jump_pos < jumps.size() && jumps[jump_pos].t <= right) {
      times.push_back(jumps[jump_pos].t);
      sizes.push_back(jumps[jump_pos].x);
      ++jump_pos;
    }
    const double mid = 0.5 * (left + right);
    const double drift = prior.rate()(mid) * small_mass_at(mid) * (right - left);
    times.push_back(right);
    sizes.push_back(drift);
    left = right;
  }
  for (; jump_pos < jumps.size(); ++jump_pos) {
    times.push_back(jumps[jump_pos].t);
    sizes.push_back(jumps[jump_pos].x);
  }
  return HazardPath(std::move(times), std::move(sizes));
}

}  // namespace levycox

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "levycox/prior.hpp"
#include "levycox/rng.hpp"

namespace levycox::detail {

struct LevyJump {
  double t = 0.0;
  double x = 0.0;
};

/// Poisson draws from the measure lambda(t) g_t(x)/x extra(t, u) dx dt on
/// [0, horizon] x [eps, 1], where u = -log(1-x) and 0 <= extra <= 1.
/// Thinning envelope from the declared (C1)-type bound
/// g_t(x) <= g_star (1-x)^{varsigma-1}: split [eps, 1] at s = max(eps, 1/2),
/// dominate 1/x on the left piece and (1-x)^{varsigma-1} on the right piece.
/// Returned jumps are sorted by time.
template <class Extra>
std::vector<LevyJump> sample_levy_jumps(const NiiPrior& prior, double horizon,
                                        double eps, Rng& rng, Extra&& extra) {
  std::vector<LevyJump> out;
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("levy sampler: epsilon must lie in (0,1)");
  if (!(horizon > 0.0)) return out;

  const double sigma = prior.varsigma();
  const double g_star = prior.g_star();
  const double lambda_max = prior.rate().max_value();
  if (!(lambda_max > 0.0)) return out;

  const double split = std::max(eps, 0.5);

  // Candidate counts for the two envelope regions.
  const double m_left =
      eps < split
          ? std::max(std::pow(1.0 - eps, sigma - 1.0), std::pow(1.0 - split, sigma - 1.0))
          : 0.0;
  const double mass_left =
      eps < split ? horizon * lambda_max * g_star * m_left * std::log(split / eps) : 0.0;
  const double one_minus_split = 1.0 - split;
  const double mass_right = horizon * lambda_max * g_star / split *
                            std::pow(one_minus_split, sigma) / sigma;

  auto accept_ratio_guard = [](double r) {
    if (r > 1.0 + 1e-9)
      throw NumericalError("levy sampler: envelope violated; g_star too small");
    return std::min(r, 1.0);
  };

  const long n_left = rng.poisson(mass_left);
  for (long j = 0; j < n_left; ++j) {
    const double t = horizon * rng.uniform();
    const double x = eps * std::pow(split / eps, rng.uniform());
    const double u = -std::log1p(-x);
    // ratio = lambda g_t(x) extra / (lambda_max g_star m_left); the envelope
    // dominates because g_t(x) <= g_star (1-x)^{sigma-1} <= g_star m_left here.
    const double ratio =
        accept_ratio_guard(prior.rate()(t) / lambda_max *
                           prior.g_u(t, u) / (g_star * m_left) * extra(t, x, u));
    if (rng.uniform() < ratio) out.push_back({t, x});
  }

  const long n_right = rng.poisson(mass_right);
  for (long j = 0; j < n_right; ++j) {
    const double t = horizon * rng.uniform();
    const double omx = one_minus_split * std::pow(rng.uniform_pos(), 1.0 / sigma);
    const double x = 1.0 - omx;
    const double u = -std::log(omx);
    const double w = prior.g_u(t, u) * std::exp(-u * (1.0 - sigma));
    const double ratio = accept_ratio_guard(prior.rate()(t) / lambda_max *
                                            (w / g_star) * (split / x) *
                                            extra(t, x, u));
    if (rng.uniform() < ratio) out.push_back({t, x});
  }

  std::sort(out.begin(), out.end(),
            [](const LevyJump& a, const LevyJump& b) { return a.t < b.t; });
  return out;
}

}  // namespace levycox::detail

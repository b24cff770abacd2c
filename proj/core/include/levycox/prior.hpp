#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levycox/hazard_path.hpp"
#include "levycox/piecewise.hpp"

namespace levycox {

/// Jump-size density family g_t(x) on [0,1] (one probability density per
/// time). Families are piecewise constant in t in all shipped constructions;
/// a fully time-varying family can be supplied through GenericJumpFamily.
class JumpFamily {
 public:
  virtual ~JumpFamily() = default;

  virtual double g(double t, double x) const = 0;

  /// g_t(1 - e^{-u}) evaluated stably in the u = -log(1-x) coordinate.
  virtual double g_u(double t, double u) const = 0;

  /// Interior time breakpoints between which g_t does not change.
  virtual const std::vector<double>& time_breaks() const = 0;

  /// True when g_t is constant between consecutive breakpoints, so inner
  /// jump integrals can be computed once per piece.
  virtual bool piecewise_homogeneous() const { return true; }
};

class BetaJumpFamily final : public JumpFamily {
 public:
  explicit BetaJumpFamily(PiecewiseConstant c) : c_(std::move(c)) {}
  double g(double t, double x) const override;
  double g_u(double t, double u) const override;
  const std::vector<double>& time_breaks() const override { return c_.breaks(); }
  const PiecewiseConstant& concentration() const { return c_; }

 private:
  PiecewiseConstant c_;
};

class GammaJumpFamily final : public JumpFamily {
 public:
  /// `normalizers` holds 1/integral(x/(-log(1-x)) (1-x)^{c-1}) per piece of c.
  GammaJumpFamily(PiecewiseConstant c, std::vector<double> normalizers)
      : c_(std::move(c)), ctilde_(std::move(normalizers)) {}
  double g(double t, double x) const override;
  double g_u(double t, double u) const override;
  const std::vector<double>& time_breaks() const override { return c_.breaks(); }
  const PiecewiseConstant& concentration() const { return c_; }
  double ctilde(double t) const {
    return ctilde_[c_.piece_index(t)];
  }

 private:
  PiecewiseConstant c_;
  std::vector<double> ctilde_;
};

class GenericJumpFamily final : public JumpFamily {
 public:
  GenericJumpFamily(std::function<double(double, double)> g,
                    std::vector<double> time_breaks = {},
                    bool piecewise_homogeneous = false)
      : fn_(std::move(g)),
        breaks_(std::move(time_breaks)),
        homogeneous_(piecewise_homogeneous) {}
  double g(double t, double x) const override { return fn_(t, x); }
  double g_u(double t, double u) const override;
  const std::vector<double>& time_breaks() const override { return breaks_; }
  bool piecewise_homogeneous() const override { return homogeneous_; }

 private:
  std::function<double(double, double)> fn_;
  std::vector<double> breaks_;
  bool homogeneous_;
};

struct PriorMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Numerical verdicts for the prior regularity conditions: boundedness of
/// (1-x)^{1-varsigma} g_t(x) against the declared envelope constant, and the
/// Holder-type behaviour of g_t near 0 against the boundary function k(t).
struct ConditionReport {
  double envelope_sup = 0.0;   // attained sup (1-x)^{1-varsigma} g_t(x)
  bool envelope_ok = false;    // finite and within the declared g_star
  double holder_sup = 0.0;     // attained sup |g_t(h) - k(t)| / h^alpha
  bool holder_ok = false;      // finite over the probed grid
  bool k_bounds_ok = false;    // k(t) within [k_lower, k_upper] on the grid
};

/// An NII prior on the cumulative hazard over [0, tau]: Levy density
/// g_t(x) lambda(t) / x on [0, tau] x (0, 1], plus the regularity constants
/// used by samplers and diagnostics. Immutable and cheap to copy.
class NiiPrior {
 public:
  NiiPrior(PiecewiseConstant lambda, std::shared_ptr<const JumpFamily> family,
           double varsigma, double g_star, std::function<double(double)> k,
           double k_lower, double k_upper, double alpha, double tau,
           std::string description);

  double tau() const { return tau_; }
  const PiecewiseConstant& rate() const { return lambda_; }
  double mean_measure(double t) const { return lambda_.integral(0.0, t); }

  double g(double t, double x) const { return family_->g(t, x); }
  double g_u(double t, double u) const { return family_->g_u(t, u); }
  const JumpFamily& family() const { return *family_; }

  /// Levy density g_t(x) lambda(t) / x. Throws ValidationError for x <= 0
  /// (the density diverges at 0) or x > 1.
  double levy_density(double t, double x) const;

  /// Mean and variance of A(t) from the moment formulas of the Levy measure.
  PriorMoments moments(double t) const;

  /// Evaluate the regularity conditions on a grid of the given resolution.
  ConditionReport check_conditions(int grid_resolution = 64) const;

  double varsigma() const { return varsigma_; }
  double g_star() const { return g_star_; }
  double k(double t) const { return k_(t); }
  double k_lower() const { return k_lower_; }
  double k_upper() const { return k_upper_; }
  double alpha() const { return alpha_; }
  const std::string& description() const { return description_; }

  /// Concentration function c(t) when this is a beta-process prior; enables
  /// the closed-form posterior path (digamma/Beta-function identities).
  const std::optional<PiecewiseConstant>& beta_concentration() const {
    return beta_concentration_;
  }

  /// For gamma-process priors: the rate of the transformed mean measure
  /// (c(s)/ctilde(s)) lambda(s) reported by the construction.
  const std::optional<PiecewiseConstant>& gamma_rate_tilde() const {
    return gamma_rate_tilde_;
  }

  /// integral_0^eps g_t(x) dx: mass the path sampler replaces by its mean.
  double small_jump_mass(double t, double eps) const;

  /// integral_0^1 x g_t(x) dx (the variance rate of the Levy measure).
  double g_first_moment(double t) const;

  /// Interior breakpoints of (lambda, g) within (0, horizon).
  std::vector<double> segment_breaks(double horizon) const;

 private:
  friend NiiPrior beta_process_prior(PiecewiseConstant, PiecewiseConstant, double);
  friend NiiPrior gamma_process_prior(PiecewiseConstant, PiecewiseConstant, double);

  PiecewiseConstant lambda_;
  std::shared_ptr<const JumpFamily> family_;
  double varsigma_;
  double g_star_;
  std::function<double(double)> k_;
  double k_lower_;
  double k_upper_;
  double alpha_;
  double tau_;
  std::string description_;
  std::optional<PiecewiseConstant> beta_concentration_;
  std::optional<PiecewiseConstant> gamma_rate_tilde_;
};

/// Beta-process prior with mean measure Lambda (density `lambda`) and scale
/// c(t): g_t(x) = c(t) (1-x)^{c(t)-1}, varsigma = inf c, k(t) = c(t).
NiiPrior beta_process_prior(PiecewiseConstant c, PiecewiseConstant lambda,
                            double tau);

/// Gamma-process prior with scale c(t):
/// g_t(x) = ctilde(t) x / (-log(1-x)) (1-x)^{c(t)-1} with ctilde the
/// normalizing constant. The spec keeps the supplied `lambda` as the rate of
/// the mean measure (so E A(t) = Lambda(t)) and reports the transformed rate
/// (c/ctilde) lambda alongside. varsigma is set just below c_*/2.
NiiPrior gamma_process_prior(PiecewiseConstant c, PiecewiseConstant lambda,
                             double tau);

/// Sample one path of the prior on [0, tau]: jumps of size >= epsilon drawn
/// as a thinned Poisson measure, jumps below epsilon replaced by their mean
/// contribution spread over a fine time grid. Deterministic given the seed.
HazardPath sample_prior_path(const NiiPrior& prior, double epsilon,
                             std::uint64_t seed);

/// Total mean contribution of the suppressed small jumps up to time t:
/// integral_0^t integral_0^eps x nu(ds, dx). This is exactly the drift the
/// path sampler adds back.
double small_jump_compensation(const NiiPrior& prior, double epsilon, double t);

}  // namespace levycox

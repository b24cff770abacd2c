#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "levycox/errors.hpp"

namespace levycox {

/// Right-censored proportional-hazards data: n records (time, status,
/// covariates), a covariate dimension p, and a study horizon tau.
/// Construction enforces the hard invariants (strictly positive finite times,
/// status in {0,1}, finite covariates of equal dimension, tau >= max time);
/// the statistical conditions (distinct event times, non-degenerate design)
/// are checked separately by validate_dataset. Records keep their input
/// order; everything downstream sorts internally, so all derived quantities
/// are permutation invariant.
class SurvivalDataset {
 public:
  /// `times`, `status` of length n; `covariates` is n x p. tau < 0 means
  /// "default to the maximum observed time".
  SurvivalDataset(std::vector<double> times, std::vector<int> status,
                  Eigen::MatrixXd covariates, double tau = -1.0);

  int n() const { return static_cast<int>(times_.size()); }
  int p() const { return static_cast<int>(covariates_.cols()); }
  double time(int i) const { return times_[static_cast<std::size_t>(i)]; }
  int status(int i) const { return status_[static_cast<std::size_t>(i)]; }
  Eigen::RowVectorXd covariate(int i) const { return covariates_.row(i); }
  const Eigen::MatrixXd& covariates() const { return covariates_; }
  double tau() const { return tau_; }

  /// Same data with a different horizon (must cover the observed times).
  SurvivalDataset with_tau(double tau) const;

  /// Largest L1 norm among the covariate vectors.
  double max_l1_norm() const;

  int uncensored_count() const;

  friend bool operator==(const SurvivalDataset&, const SurvivalDataset&);

 private:
  std::vector<double> times_;
  std::vector<int> status_;
  Eigen::MatrixXd covariates_;
  double tau_;
};

/// Parse the CSV interchange format: header `time,status,z1,...,zp`, one
/// record per line, '.' decimal separator. Throws ParseError naming the
/// offending row. tau defaults to the maximum observed time.
SurvivalDataset parse_dataset(std::string_view text);

/// Emit the identical CSV format; parse(serialize(ds)) == ds exactly
/// (shortest round-trip number formatting).
std::string serialize_dataset(const SurvivalDataset& ds);

/// One failed check discovered by validate_dataset.
struct ConditionViolation {
  std::string code;     // "tied-event-times", "collinear-covariates", ...
  std::string message;
};

struct ValidationVerdict {
  bool passed = false;
  std::vector<ConditionViolation> violations;
};

/// Checks the regularity surrogates required by the estimators: no tied
/// uncensored times, centered covariate design of full rank (relative rank
/// tolerance 1e-10), finite norms. Never throws; failures are listed in the
/// verdict.
ValidationVerdict validate_dataset(const SurvivalDataset& ds);

/// Parametric baseline cumulative hazards with closed-form inverses.
struct BaselineHazard {
  enum class Family { Exponential, Weibull };
  Family family = Family::Exponential;
  double rate = 1.0;   // exponential: A0(t) = rate * t
  double shape = 1.0;  // weibull: A0(t) = (rate * t)^shape

  double cumulative(double t) const;
  double inverse(double y) const;  // A0^{-1}
  double cdf(double t) const;      // F0(t) = 1 - exp(-A0(t))
  void check() const;              // throws ConfigError if not integrable/positive
};

/// Censoring variable C. Uniform draws U(0, upper) truncated at the horizon
/// (C = min(U, tau)), Point puts all mass at tau, None disables censoring.
struct CensoringLaw {
  enum class Family { None, Uniform, Point };
  Family family = Family::Uniform;
  double upper = 1.0;
};

/// Bounded covariate law, i.i.d. across coordinates.
struct CovariateLaw {
  enum class Family { Uniform, Bernoulli };
  Family family = Family::Uniform;
  double low = -1.0;
  double high = 1.0;
  double prob = 0.5;  // Bernoulli success probability
};

/// Data-generating mechanism for simulated studies.
struct TrueModelSpec {
  Eigen::VectorXd beta0;
  BaselineHazard baseline;
  CensoringLaw censoring;
  CovariateLaw covariates;
  double tau = 1.0;
};

/// Draw n records: X ~ baseline law tilted by exp(beta0'Z) (inverse
/// cumulative-hazard method), T = min(X, C), delta = 1{X <= C}. Deterministic
/// given the seed.
SurvivalDataset simulate_ph_data(const TrueModelSpec& spec, int n,
                                 std::uint64_t seed);

}  // namespace levycox

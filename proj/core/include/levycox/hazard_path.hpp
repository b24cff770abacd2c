#pragma once

#include <vector>

#include "levycox/errors.hpp"

namespace levycox {

/// Nondecreasing pure-jump path A(t) = sum of jump sizes at times <= t,
/// right-continuous with A(0) = 0. Jump times strictly increase (equal-time
/// contributions are merged at construction); sizes are nonnegative and
/// finite. Sampled hazard paths additionally keep every jump in [0, 1] --
/// that is a property of the sampler, not of this container (the Breslow
/// estimator reuses it with unconstrained increments).
class HazardPath {
 public:
  HazardPath() = default;

  /// `times` ascending (ties allowed, merged), sizes nonnegative.
  HazardPath(std::vector<double> times, std::vector<double> sizes);

  /// A(t): total mass at or before t.
  double operator()(double t) const;

  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  int jump_count() const { return static_cast<int>(times_.size()); }
  const std::vector<double>& jump_times() const { return times_; }
  const std::vector<double>& jump_sizes() const { return sizes_; }

  /// Largest single jump (0 for an empty path).
  double max_jump() const;

 private:
  std::vector<double> times_;
  std::vector<double> sizes_;
  std::vector<double> cumulative_;
};

}  // namespace levycox

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "levycox/errors.hpp"

namespace levycox {

/// Right-continuous piecewise-constant function on [0, inf). Used for prior
/// rate functions lambda(t) and concentration functions c(t); the constant
/// case is a single piece. Integrals are exact.
class PiecewiseConstant {
 public:
  PiecewiseConstant() : values_{0.0} {}
  /* implicit */ PiecewiseConstant(double constant) : values_{constant} {}

  /// `breaks` are strictly increasing interior breakpoints; `values` has one
  /// more entry than `breaks`. values[k] applies on [breaks[k-1], breaks[k]).
  PiecewiseConstant(std::vector<double> breaks, std::vector<double> values)
      : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (values_.size() != breaks_.size() + 1)
      throw ConfigError("PiecewiseConstant: need one more value than breaks");
    for (std::size_t k = 0; k < breaks_.size(); ++k) {
      if (!std::isfinite(breaks_[k]) ||
          (k > 0 && breaks_[k] <= breaks_[k - 1]))
        throw ConfigError("PiecewiseConstant: breaks must increase strictly");
    }
    for (double v : values_)
      if (!std::isfinite(v)) throw ConfigError("PiecewiseConstant: non-finite value");
  }

  double operator()(double t) const { return values_[piece_index(t)]; }

  /// Exact integral over [a, b], a <= b.
  double integral(double a, double b) const {
    if (b <= a) return 0.0;
    double total = 0.0;
    double left = a;
    for (std::size_t k = 0; k < breaks_.size() && left < b; ++k) {
      if (breaks_[k] <= left) continue;
      const double right = std::min(breaks_[k], b);
      total += values_[k] * (right - left);
      left = right;
    }
    if (left < b) total += values_.back() * (b - left);
    return total;
  }

  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
  double max_value() const { return *std::max_element(values_.begin(), values_.end()); }
  bool is_constant() const { return breaks_.empty(); }

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  std::size_t piece_index(double t) const {
    // values_[k] applies on [breaks_[k-1], breaks_[k]).
    return static_cast<std::size_t>(
        std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
  }

  PiecewiseConstant scaled(double factor) const {
    PiecewiseConstant out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
  }

  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// Union of the breakpoints of two piecewise-constant functions, restricted
/// to (0, horizon). Handy for iterating over intervals where both are constant.
inline std::vector<double> merged_breaks(const PiecewiseConstant& a,
                                         const PiecewiseConstant& b,
                                         double horizon) {
  std::vector<double> out;
  for (double t : a.breaks())
    if (t > 0.0 && t < horizon) out.push_back(t);
  for (double t : b.breaks())
    if (t > 0.0 && t < horizon) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace levycox

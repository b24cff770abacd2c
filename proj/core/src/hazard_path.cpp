#include "levycox/hazard_path.hpp"

#include <algorithm>
#include <cmath>

namespace levycox {

HazardPath::HazardPath(std::vector<double> times, std::vector<double> sizes) {
  if (times.size() != sizes.size())
    throw ValidationError("hazard path: times and sizes disagree");
  times_.reserve(times.size());
  sizes_.reserve(sizes.size());
  double prev = -1.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const double s = sizes[k];
    if (!std::isfinite(t) || t < 0.0)
      throw ValidationError("hazard path: jump times must be finite and >= 0");
    if (!std::isfinite(s) || s < 0.0)
      throw ValidationError("hazard path: jump sizes must be finite and >= 0");
    if (t < prev) throw ValidationError("hazard path: jump times must ascend");
    if (t == prev) {
      sizes_.back() += s;
    } else {
      times_.push_back(t);
      sizes_.push_back(s);
      prev = t;
    }
  }
  cumulative_.resize(sizes_.size());
  double running = 0.0;
  for (std::size_t k = 0; k < sizes_.size(); ++k) {
    running += sizes_[k];
    cumulative_[k] = running;
  }
}

double HazardPath::operator()(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double HazardPath::max_jump() const {
  double m = 0.0;
  for (double s : sizes_) m = std::max(m, s);
  return m;
}

}  // namespace levycox

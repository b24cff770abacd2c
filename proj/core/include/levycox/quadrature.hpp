#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <tuple>
#include <vector>

#include "levycox/errors.hpp"

namespace levycox {

/// Tolerances for adaptive integration. A panel queue is refined until the
/// summed error estimate drops below max(abs_tol, rel_tol * |integral|).
struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_panels = 20000;
};

struct QuadPanel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<QuadPanel> panels;  // sorted by left endpoint
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGk15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGk15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
QuadPanel gk15_panel(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = kGk15WeightsK[7] * f_center;
  double gauss = kGk15WeightsG[3] * f_center;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kGk15Nodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kGk15WeightsK[j] * pair;
    if (j % 2 == 1) gauss += kGk15WeightsG[j / 2] * pair;
  }
  QuadPanel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.error = std::abs((kronrod - gauss) * half);
  return p;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. `breakpoints` seeds
/// the initial panel partition (interior points, need not be sorted); use it
/// to pre-split around boundary layers or known kinks. When `keep_panels` is
/// set, the refined partition and per-panel masses are returned so callers
/// can reuse them (CDF tabulation does).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, QuadOptions opt = {},
                              std::vector<double> breakpoints = {},
                              bool keep_panels = false) {
  QuadResult out;
  if (!(b > a)) return out;

  std::erase_if(breakpoints, [&](double x) { return !(x > a && x < b); });
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  auto cmp = [](const QuadPanel& x, const QuadPanel& y) {
    return x.error < y.error;
  };
  std::priority_queue<QuadPanel, std::vector<QuadPanel>, decltype(cmp)> queue(cmp);

  double total = 0.0;
  double total_err = 0.0;
  int panel_count = 0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    QuadPanel p = detail::gk15_panel(f, breakpoints[k], breakpoints[k + 1]);
    if (!std::isfinite(p.value))
      throw NumericalError("integrate_adaptive: non-finite integrand");
    total += p.value;
    total_err += p.error;
    queue.push(p);
    ++panel_count;
  }

  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

  while (total_err > tolerance() && panel_count < opt.max_panels) {
    QuadPanel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // at float resolution
    queue.pop();
    QuadPanel left = detail::gk15_panel(f, worst.a, mid);
    QuadPanel right = detail::gk15_panel(f, mid, worst.b);
    if (!std::isfinite(left.value) || !std::isfinite(right.value))
      throw NumericalError("integrate_adaptive: non-finite integrand");
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panel_count;
  }

  if (total_err > 1e3 * std::max(tolerance(), 1e-300) &&
      panel_count >= opt.max_panels)
    throw NumericalError("integrate_adaptive: failed to converge");

  out.value = total;
  out.error_estimate = total_err;
  if (keep_panels) {
    out.panels.reserve(static_cast<std::size_t>(panel_count));
    while (!queue.empty()) {
      out.panels.push_back(queue.top());
      queue.pop();
    }
    std::sort(out.panels.begin(), out.panels.end(),
              [](const QuadPanel& x, const QuadPanel& y) { return x.a < y.a; });
  }
  return out;
}

template <class F>
double integrate(F&& f, double a, double b, QuadOptions opt = {},
                 std::vector<double> breakpoints = {}) {
  return integrate_adaptive(f, a, b, opt, std::move(breakpoints)).value;
}

/// Monotone cubic Hermite interpolant (Fritsch-Carlson limited slopes).
/// Stores an increasing map x -> y; eval() and the inverse solve() are both
/// monotone. Used for tabulated-CDF sampling.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  /// xs strictly increasing, ys nondecreasing; slopes optional (nullptr ->
  /// finite-difference slopes). Provided slopes are clamped to keep the
  /// interpolant monotone.
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys,
                const std::vector<double>* slopes = nullptr)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n)
      throw ConfigError("MonotoneCubic: need matching arrays of size >= 2");
    slopes_.resize(n);
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double dx = xs_[i + 1] - xs_[i];
      if (!(dx > 0.0)) throw ConfigError("MonotoneCubic: xs must increase");
      secant[i] = (ys_[i + 1] - ys_[i]) / dx;
      if (secant[i] < 0.0) secant[i] = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double m;
      if (slopes) {
        m = (*slopes)[i];
      } else if (i == 0) {
        m = secant[0];
      } else if (i == n - 1) {
        m = secant[n - 2];
      } else {
        m = 0.5 * (secant[i - 1] + secant[i]);
      }
      // Fritsch-Carlson limiter: a flat neighboring secant forces a flat
      // tangent, otherwise cap at three times the smaller secant.
      const double s_left = i == 0 ? secant[0] : secant[i - 1];
      const double s_right = i == n - 1 ? secant[n - 2] : secant[i];
      const double cap = 3.0 * std::min(s_left, s_right);
      slopes_[i] = std::clamp(m, 0.0, std::max(cap, 0.0));
    }
  }

  double eval(double x) const {
    const auto [i, t, dx] = locate(x);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * ys_[i] + h10 * dx * slopes_[i] + h01 * ys_[i + 1] +
           h11 * dx * slopes_[i + 1];
  }

  /// Inverse: smallest x with eval(x) = y (y clamped to the range). Guarded
  /// Newton within the bracketing cell.
  double solve(double y) const {
    if (y <= ys_.front()) return xs_.front();
    if (y >= ys_.back()) return xs_.back();
    std::size_t lo = std::upper_bound(ys_.begin(), ys_.end(), y) - ys_.begin();
    std::size_t i = lo == 0 ? 0 : lo - 1;
    while (i + 2 < xs_.size() && ys_[i + 1] <= y) ++i;
    double a = xs_[i], b = xs_[i + 1];
    double x = a + (b - a) * (ys_[i + 1] > ys_[i]
                                  ? (y - ys_[i]) / (ys_[i + 1] - ys_[i])
                                  : 0.5);
    for (int iter = 0; iter < 60; ++iter) {
      const double fx = eval(x) - y;
      if (fx > 0.0)
        b = x;
      else
        a = x;
      const double dfx = derivative(x);
      double next = dfx > 0.0 ? x - fx / dfx : 0.5 * (a + b);
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) return next;
      x = next;
    }
    return x;
  }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

 private:
  std::tuple<std::size_t, double, double> locate(double x) const {
    if (x <= xs_.front()) return {0, 0.0, xs_[1] - xs_[0]};
    if (x >= xs_.back()) {
      const std::size_t i = xs_.size() - 2;
      return {i, 1.0, xs_[i + 1] - xs_[i]};
    }
    const std::size_t i =
        (std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) - 1;
    const double dx = xs_[i + 1] - xs_[i];
    return {i, (x - xs_[i]) / dx, dx};
  }

  double derivative(double x) const {
    const auto [i, t, dx] = locate(x);
    const double d00 = 6 * t * (t - 1);
    const double d10 = (1 - t) * (1 - 3 * t);
    const double d01 = -d00;
    const double d11 = t * (3 * t - 2);
    return d00 * ys_[i] / dx + d10 * slopes_[i] + d01 * ys_[i + 1] / dx +
           d11 * slopes_[i + 1];
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;
};

}  // namespace levycox

#include "levycox/dataset.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <system_error>

#include "levycox/rng.hpp"

namespace levycox {

SurvivalDataset::SurvivalDataset(std::vector<double> times,
                                 std::vector<int> status,
                                 Eigen::MatrixXd covariates, double tau)
    : times_(std::move(times)),
      status_(std::move(status)),
      covariates_(std::move(covariates)),
      tau_(tau) {
  const std::size_t n = times_.size();
  if (status_.size() != n ||
      static_cast<std::size_t>(covariates_.rows()) != n)
    throw ValidationError("dataset: times, status, covariates disagree on n");
  double max_time = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(times_[i] > 0.0) || !std::isfinite(times_[i]))
      throw ValidationError("dataset: times must be strictly positive and finite");
    if (status_[i] != 0 && status_[i] != 1)
      throw ValidationError("dataset: status must be 0 or 1");
    max_time = std::max(max_time, times_[i]);
  }
  if (!covariates_.allFinite())
    throw ValidationError("dataset: covariates must be finite");
  if (tau_ < 0.0)
    tau_ = max_time;
  else if (tau_ < max_time || !std::isfinite(tau_))
    throw ValidationError("dataset: tau must cover every observed time");
}

SurvivalDataset SurvivalDataset::with_tau(double tau) const {
  return SurvivalDataset(times_, status_, covariates_, tau);
}

double SurvivalDataset::max_l1_norm() const {
  double m = 0.0;
  for (int i = 0; i < n(); ++i)
    m = std::max(m, covariates_.row(i).lpNorm<1>());
  return m;
}

int SurvivalDataset::uncensored_count() const {
  int q = 0;
  for (int s : status_) q += s;
  return q;
}

bool operator==(const SurvivalDataset& a, const SurvivalDataset& b) {
  return a.times_ == b.times_ && a.status_ == b.status_ &&
         a.tau_ == b.tau_ && a.covariates_ == b.covariates_;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(std::string_view cell, int row) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("row " + std::to_string(row) + ": malformed number '" +
                     std::string(cell) + "'");
  return value;
}

void append_number(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

SurvivalDataset parse_dataset(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    std::string_view line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = pos + 1;
  }
  if (lines.empty()) throw ParseError("empty input: missing header");

  const auto header = split(lines[0], ',');
  if (header.size() < 2 || header[0] != "time" || header[1] != "status")
    throw ParseError("header must start with 'time,status'");
  const int p = static_cast<int>(header.size()) - 2;
  for (int k = 0; k < p; ++k) {
    const std::string expected = "z" + std::to_string(k + 1);
    if (header[static_cast<std::size_t>(k) + 2] != expected)
      throw ParseError("header covariate column " + std::to_string(k + 1) +
                       " must be named '" + expected + "'");
  }

  const int n = static_cast<int>(lines.size()) - 1;
  std::vector<double> times;
  std::vector<int> status;
  times.reserve(static_cast<std::size_t>(n));
  status.reserve(static_cast<std::size_t>(n));
  Eigen::MatrixXd z(n, p);
  for (int i = 0; i < n; ++i) {
    const int row = i + 1;  // 1-based data row for messages
    const auto cells = split(lines[static_cast<std::size_t>(i) + 1], ',');
    if (static_cast<int>(cells.size()) != p + 2)
      throw ParseError("row " + std::to_string(row) +
                       ": expected " + std::to_string(p + 2) + " columns, got " +
                       std::to_string(cells.size()));
    times.push_back(parse_number(cells[0], row));
    const double s = parse_number(cells[1], row);
    if (s != 0.0 && s != 1.0)
      throw ParseError("row " + std::to_string(row) + ": status must be 0 or 1");
    status.push_back(static_cast<int>(s));
    for (int k = 0; k < p; ++k)
      z(i, k) = parse_number(cells[static_cast<std::size_t>(k) + 2], row);
  }
  try {
    return SurvivalDataset(std::move(times), std::move(status), std::move(z));
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_dataset(const SurvivalDataset& ds) {
  std::string out = "time,status";
  for (int k = 0; k < ds.p(); ++k) out += ",z" + std::to_string(k + 1);
  out += '\n';
  for (int i = 0; i < ds.n(); ++i) {
    append_number(out, ds.time(i));
    out += ',';
    out += ds.status(i) ? '1' : '0';
    for (int k = 0; k < ds.p(); ++k) {
      out += ',';
      append_number(out, ds.covariates()(i, k));
    }
    out += '\n';
  }
  return out;
}

ValidationVerdict validate_dataset(const SurvivalDataset& ds) {
  ValidationVerdict verdict;

  std::map<double, int> event_times;
  for (int i = 0; i < ds.n(); ++i)
    if (ds.status(i) == 1) ++event_times[ds.time(i)];
  for (const auto& [t, count] : event_times) {
    if (count > 1) {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), t);
      verdict.violations.push_back(
          {"tied-event-times", std::to_string(count) +
                                   " uncensored records share time " +
                                   std::string(buf, ptr)});
    }
  }

  if (ds.n() > 0 && ds.p() > 0) {
    Eigen::MatrixXd centered = ds.covariates();
    centered.rowwise() -= centered.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    const auto& sv = svd.singularValues();
    const double threshold = 1e-10 * sv(0);
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) > threshold && sv(k) > 0.0) ++rank;
    if (rank < ds.p())
      verdict.violations.push_back(
          {"collinear-covariates",
           "centered covariate design has rank " + std::to_string(rank) +
               " < p = " + std::to_string(ds.p())});
  }

  verdict.passed = verdict.violations.empty();
  return verdict;
}

void BaselineHazard::check() const {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw ConfigError("baseline hazard: rate must be positive and finite");
  if (family == Family::Weibull && (!(shape > 0.0) || !std::isfinite(shape)))
    throw ConfigError("baseline hazard: shape must be positive and finite");
}

double BaselineHazard::cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family) {
    case Family::Exponential:
      return rate * t;
    case Family::Weibull:
      return std::pow(rate * t, shape);
  }
  return 0.0;
}

double BaselineHazard::inverse(double y) const {
  if (y <= 0.0) return 0.0;
  switch (family) {
    case Family::Exponential:
      return y / rate;
    case Family::Weibull:
      return std::pow(y, 1.0 / shape) / rate;
  }
  return 0.0;
}

double BaselineHazard::cdf(double t) const { return -std::expm1(-cumulative(t)); }

SurvivalDataset simulate_ph_data(const TrueModelSpec& spec, int n,
                                 std::uint64_t seed) {
  if (n < 1) throw ConfigError("simulate_ph_data: n must be >= 1");
  spec.baseline.check();
  if (!(spec.tau > 0.0) || !std::isfinite(spec.tau))
    throw ConfigError("simulate_ph_data: tau must be positive and finite");
  if (spec.censoring.family == CensoringLaw::Family::Uniform &&
      !(spec.censoring.upper > 0.0))
    throw ConfigError("simulate_ph_data: censoring upper bound must be positive");
  if (spec.covariates.family == CovariateLaw::Family::Uniform &&
      !(spec.covariates.high > spec.covariates.low))
    throw ConfigError("simulate_ph_data: covariate range must be nonempty");

  const int p = static_cast<int>(spec.beta0.size());
  Rng rng(seed);
  std::vector<double> times;
  std::vector<int> status;
  times.reserve(static_cast<std::size_t>(n));
  status.reserve(static_cast<std::size_t>(n));
  Eigen::MatrixXd z(n, p);

  double max_time = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < p; ++k) {
      switch (spec.covariates.family) {
        case CovariateLaw::Family::Uniform:
          z(i, k) = spec.covariates.low +
                    (spec.covariates.high - spec.covariates.low) * rng.uniform();
          break;
        case CovariateLaw::Family::Bernoulli:
          z(i, k) = rng.uniform() < spec.covariates.prob ? 1.0 : 0.0;
          break;
      }
    }
    const double risk = std::exp(z.row(i).dot(spec.beta0));
    const double x = spec.baseline.inverse(rng.exponential() / risk);

    double censor = std::numeric_limits<double>::infinity();
    switch (spec.censoring.family) {
      case CensoringLaw::Family::None:
        break;
      case CensoringLaw::Family::Uniform:
        censor = std::min(spec.censoring.upper * rng.uniform_pos(), spec.tau);
        break;
      case CensoringLaw::Family::Point:
        censor = spec.tau;
        break;
    }
    const double t = std::min(x, censor);
    times.push_back(t);
    status.push_back(x <= censor ? 1 : 0);
    max_time = std::max(max_time, t);
  }
  return SurvivalDataset(std::move(times), std::move(status), std::move(z),
                         std::max(spec.tau, max_time));
}

}  // namespace levycox

#include "levycox/risk_sets.hpp"

#include <algorithm>
#include <numeric>

namespace levycox {

RiskSets build_risk_sets(const SurvivalDataset& ds) {
  const detail::SortedData sd(ds);
  RiskSets out;
  out.distinct_times.reserve(static_cast<std::size_t>(sd.q()));
  for (int i = 0; i < sd.q(); ++i) {
    const int b = sd.event_block[static_cast<std::size_t>(i)];
    const double t = sd.block_time[static_cast<std::size_t>(b)];
    out.distinct_times.push_back(t);

    std::vector<int> deaths;
    for (int k = sd.block_start[static_cast<std::size_t>(b)]; k < sd.block_end(b); ++k)
      if (sd.status[static_cast<std::size_t>(k)] == 1)
        deaths.push_back(sd.order[static_cast<std::size_t>(k)]);

    std::vector<int> risk;
    risk.reserve(static_cast<std::size_t>(sd.n - sd.block_start[static_cast<std::size_t>(b)]));
    for (int k = sd.block_start[static_cast<std::size_t>(b)]; k < sd.n; ++k)
      risk.push_back(sd.order[static_cast<std::size_t>(k)]);

    std::vector<int> reduced;
    reduced.reserve(risk.size() - deaths.size());
    for (int j : risk)
      if (std::find(deaths.begin(), deaths.end(), j) == deaths.end())
        reduced.push_back(j);

    out.death_index.push_back(deaths.size() == 1 ? deaths[0] : -1);
    out.death_sets.push_back(std::move(deaths));
    out.risk_sets.push_back(std::move(risk));
    out.reduced_risk_sets.push_back(std::move(reduced));
  }
  return out;
}

namespace detail {

SortedData::SortedData(const SurvivalDataset& ds)
    : n(ds.n()), p(ds.p()), tau(ds.tau()) {
  order.resize(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (ds.time(a) != ds.time(b)) return ds.time(a) < ds.time(b);
    return ds.status(a) > ds.status(b);  // deaths precede censorings
  });

  time.resize(static_cast<std::size_t>(n));
  status.resize(static_cast<std::size_t>(n));
  z.resize(n, p);
  for (int k = 0; k < n; ++k) {
    const int i = order[static_cast<std::size_t>(k)];
    time[static_cast<std::size_t>(k)] = ds.time(i);
    status[static_cast<std::size_t>(k)] = ds.status(i);
    z.row(k) = ds.covariate(i);
  }

  for (int k = 0; k < n; ++k) {
    if (k == 0 || time[static_cast<std::size_t>(k)] != time[static_cast<std::size_t>(k) - 1]) {
      block_start.push_back(k);
      block_time.push_back(time[static_cast<std::size_t>(k)]);
    }
  }

  for (int b = 0; b < blocks(); ++b) {
    const int begin = block_start[static_cast<std::size_t>(b)];
    if (status[static_cast<std::size_t>(begin)] != 1) continue;  // no death here
    int deaths = 0;
    for (int k = begin; k < block_end(b) && status[static_cast<std::size_t>(k)] == 1; ++k)
      ++deaths;
    event_block.push_back(b);
    event_positions_begin.push_back(begin);
    event_death_count.push_back(deaths);
  }
}

Eigen::VectorXd SortedData::risk_scores(const Eigen::VectorXd& beta) const {
  return (z * beta).array().exp();
}

std::vector<double> SortedData::suffix_sums(const Eigen::VectorXd& scores) {
  const int n = static_cast<int>(scores.size());
  std::vector<double> suffix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = n - 1; k >= 0; --k)
    suffix[static_cast<std::size_t>(k)] =
        suffix[static_cast<std::size_t>(k) + 1] + scores(k);
  return suffix;
}

}  // namespace detail

}  // namespace levycox

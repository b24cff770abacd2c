#pragma once

#include <vector>

#include "levycox/dataset.hpp"

namespace levycox {

/// Event-time structure of a dataset: the ordered distinct uncensored times
/// t_1 < ... < t_q together with, at each t_i, the death set
/// D(t_i) = {j : T_j = t_i, delta_j = 1}, the risk set R(t_i) = {j : T_j >= t_i},
/// and the reduced risk set R+(t_i) = R(t_i) \ D(t_i). Indices refer to the
/// dataset's record order. On validated data each death set is a singleton,
/// recorded in death_index.
struct RiskSets {
  std::vector<double> distinct_times;
  std::vector<std::vector<int>> death_sets;
  std::vector<std::vector<int>> risk_sets;
  std::vector<std::vector<int>> reduced_risk_sets;
  std::vector<int> death_index;  // death_sets[i][0] when a singleton, else -1

  int q() const { return static_cast<int>(distinct_times.size()); }
};

RiskSets build_risk_sets(const SurvivalDataset& ds);

namespace detail {

/// Records sorted ascending by time with deaths preceding censorings at equal
/// times, grouped into equal-time blocks. This is the workhorse layout for
/// the partial likelihood and the posterior: risk sums at any time are suffix
/// sums over the sorted order taken at a block boundary.
struct SortedData {
  explicit SortedData(const SurvivalDataset& ds);

  int n = 0;
  int p = 0;
  double tau = 0.0;
  std::vector<int> order;        // sorted position -> original index
  std::vector<double> time;      // sorted
  std::vector<int> status;       // sorted
  Eigen::MatrixXd z;             // sorted rows

  std::vector<int> block_start;  // first sorted position of each equal-time block
  std::vector<double> block_time;
  int blocks() const { return static_cast<int>(block_start.size()); }
  int block_end(int b) const {
    return b + 1 < blocks() ? block_start[static_cast<std::size_t>(b) + 1] : n;
  }

  // One entry per distinct uncensored time, ascending.
  std::vector<int> event_block;       // block containing event i
  std::vector<int> event_positions_begin;  // first death position within block
  std::vector<int> event_death_count;      // deaths at t_i
  int q() const { return static_cast<int>(event_block.size()); }
  double event_time(int i) const {
    return block_time[static_cast<std::size_t>(event_block[static_cast<std::size_t>(i)])];
  }

  /// exp(z_k . beta) for every sorted record.
  Eigen::VectorXd risk_scores(const Eigen::VectorXd& beta) const;

  /// suffix[k] = sum_{j >= k} scores[j]; suffix[n] = 0.
  static std::vector<double> suffix_sums(const Eigen::VectorXd& scores);
};

}  // namespace detail

}  // namespace levycox

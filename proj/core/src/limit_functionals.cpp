#include "levycox/limit_functionals.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "levycox/errors.hpp"

namespace levycox {

LimitFunctionals::LimitFunctionals(const SurvivalDataset& ds,
                                   const Eigen::VectorXd& beta,
                                   const HazardPath& breslow_path)
    : n_(ds.n()), p_(ds.p()) {
  const detail::SortedData sd(ds);
  if (beta.size() != p_)
    throw ValidationError("limit functionals: beta has wrong dimension");

  const Eigen::VectorXd scores = sd.risk_scores(beta);
  sorted_times_ = sd.time;

  // Suffix sums over the sorted records, scaled by 1/n so lookups give the
  // empirical S^0 and S^1 directly.
  suffix_s0_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
  suffix_s1_ = Eigen::MatrixXd::Zero(p_, n_ + 1);
  Eigen::MatrixXd suffix_s2 = Eigen::MatrixXd::Zero(p_, p_);  // running only
  for (int k = n_ - 1; k >= 0; --k)
    suffix_s0_[static_cast<std::size_t>(k)] =
        suffix_s0_[static_cast<std::size_t>(k) + 1] + scores(k) / n_;
  for (int k = n_ - 1; k >= 0; --k)
    suffix_s1_.col(k) =
        suffix_s1_.col(k + 1) + scores(k) * sd.z.row(k).transpose() / n_;

  event_times_.reserve(static_cast<std::size_t>(sd.q()));
  u0_at_event_.reserve(static_cast<std::size_t>(sd.q()));
  e0_at_event_ = Eigen::MatrixXd::Zero(p_, sd.q());
  info_ = Eigen::MatrixXd::Zero(p_, p_);

  // S^2 is only needed at event times; accumulate it backwards and walk the
  // events in reverse so each suffix is formed once.
  std::vector<Eigen::MatrixXd> v_at_event(
      static_cast<std::size_t>(sd.q()));
  {
    int event = sd.q() - 1;
    int k = n_ - 1;
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p_, p_);
    for (int b = sd.blocks() - 1; b >= 0; --b) {
      for (; k >= sd.block_start[static_cast<std::size_t>(b)]; --k)
        s2.noalias() += scores(k) * sd.z.row(k).transpose() * sd.z.row(k) / n_;
      if (event >= 0 && sd.event_block[static_cast<std::size_t>(event)] == b) {
        const double s0 = suffix_s0_[static_cast<std::size_t>(
            sd.block_start[static_cast<std::size_t>(b)])];
        if (!(s0 > 0.0))
          throw NumericalError("limit functionals: degenerate risk set");
        const Eigen::VectorXd mean =
            suffix_s1_.col(sd.block_start[static_cast<std::size_t>(b)]) / s0;
        v_at_event[static_cast<std::size_t>(event)] =
            s2 / s0 - mean * mean.transpose();
        --event;
      }
    }
  }

  double u0 = 0.0;
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(p_);
  const auto& jump_times = breslow_path.jump_times();
  const auto& jump_sizes = breslow_path.jump_sizes();
  for (int i = 0; i < sd.q(); ++i) {
    const int b = sd.event_block[static_cast<std::size_t>(i)];
    const int start = sd.block_start[static_cast<std::size_t>(b)];
    const double t = sd.block_time[static_cast<std::size_t>(b)];
    const double s0 = suffix_s0_[static_cast<std::size_t>(start)];

    // Breslow increment at this event time (0 if the path lacks it).
    const auto it = std::lower_bound(jump_times.begin(), jump_times.end(), t);
    const double dA =
        (it != jump_times.end() && *it == t)
            ? jump_sizes[static_cast<std::size_t>(it - jump_times.begin())]
            : 0.0;

    u0 += dA / s0;
    e0.noalias() += suffix_s1_.col(start) / s0 * dA;
    info_.noalias() += v_at_event[static_cast<std::size_t>(i)] * s0 * dA;

    event_times_.push_back(t);
    u0_at_event_.push_back(u0);
    e0_at_event_.col(i) = e0;
  }

  if (p_ > 0) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info_);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
        (ldlt.vectorD().array() > 1e-14 * std::max(info_.norm(), 1e-300)).all()) {
      info_inverse_ = ldlt.solve(Eigen::MatrixXd::Identity(p_, p_));
      info_invertible_ = true;
    }
  }
}

double LimitFunctionals::S0(double t) const {
  const auto it =
      std::lower_bound(sorted_times_.begin(), sorted_times_.end(), t);
  return suffix_s0_[static_cast<std::size_t>(it - sorted_times_.begin())];
}

Eigen::VectorXd LimitFunctionals::S1(double t) const {
  const auto it =
      std::lower_bound(sorted_times_.begin(), sorted_times_.end(), t);
  return suffix_s1_.col(static_cast<int>(it - sorted_times_.begin()));
}

double LimitFunctionals::U0(double t) const {
  const auto it =
      std::upper_bound(event_times_.begin(), event_times_.end(), t);
  if (it == event_times_.begin()) return 0.0;
  return u0_at_event_[static_cast<std::size_t>(it - event_times_.begin()) - 1];
}

Eigen::VectorXd LimitFunctionals::e0(double t) const {
  const auto it =
      std::upper_bound(event_times_.begin(), event_times_.end(), t);
  if (it == event_times_.begin()) return Eigen::VectorXd::Zero(p_);
  return e0_at_event_.col(static_cast<int>(it - event_times_.begin()) - 1);
}

LimitFunctionals limit_functionals(const SurvivalDataset& ds,
                                   const Eigen::VectorXd& beta,
                                   const HazardPath& breslow_path) {
  return LimitFunctionals(ds, beta, breslow_path);
}

double limit_covariance_A(double s, double t, const LimitFunctionals& fn) {
  if (!fn.info_invertible_)
    throw NumericalError("limit_covariance_A: information matrix is singular");
  return fn.U0(std::min(s, t)) + fn.e0(s).dot(fn.info_inverse_ * fn.e0(t));
}

}  // namespace levycox

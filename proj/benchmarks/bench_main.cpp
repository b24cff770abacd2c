#include <benchmark/benchmark.h>

#include "levycox/levycox.hpp"

namespace {

using namespace levycox;

SurvivalDataset bench_dataset(int n) {
  TrueModelSpec spec;
  spec.beta0 = Eigen::VectorXd::Constant(1, 0.5);
  spec.censoring = CensoringLaw{CensoringLaw::Family::Uniform, 5.0};
  spec.tau = 2.0;
  return simulate_ph_data(spec, n, 1234);
}

void BM_PartialLikelihoodHessian(benchmark::State& state) {
  const SurvivalDataset ds = bench_dataset(static_cast<int>(state.range(0)));
  const PartialLikelihood lik(ds);
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(lik.eval(beta, 2).value);
}
BENCHMARK(BM_PartialLikelihoodHessian)->Arg(200)->Arg(1600);

void BM_FitMle(benchmark::State& state) {
  const SurvivalDataset ds = bench_dataset(static_cast<int>(state.range(0)));
  const PartialLikelihood lik(ds);
  for (auto _ : state) benchmark::DoNotOptimize(fit_mle(lik).beta_hat(0));
}
BENCHMARK(BM_FitMle)->Arg(400);

void BM_LogMarginalClosedForm(benchmark::State& state) {
  const SurvivalDataset ds = bench_dataset(static_cast<int>(state.range(0)));
  const CoxPosterior posterior(ds, beta_process_prior(1.0, 1.0, ds.tau()));
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(posterior.log_marginal(beta));
}
BENCHMARK(BM_LogMarginalClosedForm)->Arg(200)->Arg(1600);

void BM_LogMarginalQuadrature(benchmark::State& state) {
  const SurvivalDataset ds = bench_dataset(static_cast<int>(state.range(0)));
  CoxPosterior::Options options;
  options.force_quadrature = true;
  const CoxPosterior posterior(ds, beta_process_prior(1.0, 1.0, ds.tau()),
                               CoefficientPrior::gaussian(1), options);
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(posterior.log_marginal(beta));
}
BENCHMARK(BM_LogMarginalQuadrature)->Arg(200);

void BM_JumpDistributionTable(benchmark::State& state) {
  const SurvivalDataset ds = bench_dataset(400);
  const CoxPosterior posterior(ds, beta_process_prior(1.0, 1.0, ds.tau()));
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 0.4);
  for (auto _ : state)
    benchmark::DoNotOptimize(posterior.jump_distribution(3, beta).normalizer());
}
BENCHMARK(BM_JumpDistributionTable);

void BM_PriorPath(benchmark::State& state) {
  const NiiPrior prior = beta_process_prior(1.0, 1.0, 2.0);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_prior_path(prior, 1e-4, ++seed).total());
}
BENCHMARK(BM_PriorPath);

void BM_PosteriorPath(benchmark::State& state) {
  const SurvivalDataset ds = bench_dataset(static_cast<int>(state.range(0)));
  const CoxPosterior posterior(ds, beta_process_prior(1.0, 1.0, ds.tau()));
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 0.4);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(posterior.sample_path(beta, 1e-4, ++seed).total());
}
BENCHMARK(BM_PosteriorPath)->Arg(400)->Arg(1600);

}  // namespace

BENCHMARK_MAIN();

// levycox: Bayesian proportional-hazards inference with NII process priors.
//
// Subcommands: simulate, fit, posterior, bvm-check, coverage. Each run is a
// pure function of its configuration (seeds included), so repeating a command
// reproduces its outputs byte for byte.
//
// Exit codes: 0 success (and all verdicts pass, unless --no-assert),
// 1 validation/configuration failure, 2 numerical failure (e.g. monotone
// likelihood), 3 I/O failure, 64 usage error.

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "levycox/levycox.hpp"

namespace {

using nlohmann::json;
using namespace levycox;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed while reading '" + path + "'");
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void append_number(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

PiecewiseConstant parse_rate(const json& j, const char* name) {
  if (j.is_number()) return PiecewiseConstant(j.get<double>());
  if (j.is_object() && j.contains("breaks") && j.contains("values"))
    return PiecewiseConstant(j.at("breaks").get<std::vector<double>>(),
                             j.at("values").get<std::vector<double>>());
  throw ConfigError(std::string(name) +
                    ": expected a number or {breaks, values}");
}

struct PriorConfig {
  std::string family = "beta";
  PiecewiseConstant c = 1.0;
  PiecewiseConstant lambda = 1.0;
  double epsilon = 1e-4;
};

PriorConfig parse_prior(const json& cfg) {
  PriorConfig out;
  if (!cfg.contains("prior")) return out;
  const json& prior = cfg.at("prior");
  if (prior.contains("family")) out.family = prior.at("family").get<std::string>();
  if (out.family != "beta" && out.family != "gamma")
    throw ConfigError("prior.family must be 'beta' or 'gamma'");
  if (prior.contains("c")) out.c = parse_rate(prior.at("c"), "prior.c");
  if (prior.contains("lambda"))
    out.lambda = parse_rate(prior.at("lambda"), "prior.lambda");
  if (prior.contains("epsilon")) out.epsilon = prior.at("epsilon").get<double>();
  if (!(out.epsilon > 0.0 && out.epsilon < 1.0))
    throw ConfigError("prior.epsilon must lie in (0,1)");
  return out;
}

NiiPrior build_prior(const PriorConfig& config, double tau) {
  if (config.family == "gamma")
    return gamma_process_prior(config.c, config.lambda, tau);
  return beta_process_prior(config.c, config.lambda, tau);
}

TrueModelSpec parse_model_spec(const json& sim) {
  TrueModelSpec spec;
  const std::vector<double> beta0 =
      sim.contains("beta0") ? sim.at("beta0").get<std::vector<double>>()
                            : std::vector<double>{0.5};
  spec.beta0 = Eigen::Map<const Eigen::VectorXd>(beta0.data(),
                                                 static_cast<int>(beta0.size()));
  spec.tau = sim.value("tau", 2.0);
  spec.baseline.rate = 1.0;
  spec.censoring = CensoringLaw{CensoringLaw::Family::Uniform, 5.0};
  if (sim.contains("baseline")) {
    const json& b = sim.at("baseline");
    const std::string family = b.value("family", "exponential");
    if (family == "exponential")
      spec.baseline.family = BaselineHazard::Family::Exponential;
    else if (family == "weibull")
      spec.baseline.family = BaselineHazard::Family::Weibull;
    else
      throw ConfigError("baseline.family must be 'exponential' or 'weibull'");
    spec.baseline.rate = b.value("rate", 1.0);
    spec.baseline.shape = b.value("shape", 1.0);
  }
  if (sim.contains("censoring")) {
    const json& c = sim.at("censoring");
    const std::string family = c.value("family", "uniform");
    if (family == "none")
      spec.censoring.family = CensoringLaw::Family::None;
    else if (family == "uniform")
      spec.censoring.family = CensoringLaw::Family::Uniform;
    else if (family == "point")
      spec.censoring.family = CensoringLaw::Family::Point;
    else
      throw ConfigError("censoring.family must be none|uniform|point");
    spec.censoring.upper = c.value("upper", 5.0);
  }
  if (sim.contains("covariates")) {
    const json& c = sim.at("covariates");
    const std::string family = c.value("family", "uniform");
    if (family == "uniform")
      spec.covariates.family = CovariateLaw::Family::Uniform;
    else if (family == "bernoulli")
      spec.covariates.family = CovariateLaw::Family::Bernoulli;
    else
      throw ConfigError("covariates.family must be uniform|bernoulli");
    spec.covariates.low = c.value("low", -1.0);
    spec.covariates.high = c.value("high", 1.0);
    spec.covariates.prob = c.value("prob", 0.5);
  }
  return spec;
}

SurvivalDataset load_data(const json& cfg, const std::string& data_flag,
                          double tau_flag) {
  std::optional<SurvivalDataset> ds;
  if (!data_flag.empty()) {
    ds = parse_dataset(read_file(data_flag));
  } else if (cfg.contains("data")) {
    const json& data = cfg.at("data");
    if (data.contains("path")) {
      ds = parse_dataset(read_file(data.at("path").get<std::string>()));
    } else if (data.contains("simulate")) {
      const json& sim = data.at("simulate");
      ds = simulate_ph_data(parse_model_spec(sim), sim.value("n", 100),
                            sim.value("seed", std::uint64_t{1}));
    }
  }
  if (!ds) throw ConfigError("no data source: pass --data or a data block");
  if (tau_flag > 0.0) ds = ds->with_tau(tau_flag);
  return *ds;
}

std::string fit_to_json(const FitResult& fit, int p) {
  json j;
  j["p"] = p;
  j["beta_hat"] = std::vector<double>(fit.beta_hat.data(),
                                      fit.beta_hat.data() + fit.beta_hat.size());
  std::vector<double> info;
  for (int r = 0; r < fit.info_hat.rows(); ++r)
    for (int c = 0; c < fit.info_hat.cols(); ++c) info.push_back(fit.info_hat(r, c));
  j["info_hat"] = info;  // row-major
  json breslow = json::array();
  for (int k = 0; k < fit.breslow.jump_count(); ++k)
    breslow.push_back({fit.breslow.jump_times()[static_cast<std::size_t>(k)],
                       fit.breslow.jump_sizes()[static_cast<std::size_t>(k)]});
  j["breslow"] = breslow;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["gradient_norm"] = fit.gradient_norm;
  return j.dump(2) + "\n";
}

ChainConfig parse_chain(const json& cfg) {
  ChainConfig chain;
  if (cfg.contains("chain")) {
    const json& c = cfg.at("chain");
    chain.draws = c.value("draws", chain.draws);
    chain.burn_in = c.value("burn_in", chain.burn_in);
    chain.seed = c.value("seed", chain.seed);
  }
  return chain;
}

CoefficientPrior parse_beta_prior(const json& cfg, int p) {
  double scale = 10.0;
  if (cfg.contains("beta_prior"))
    scale = cfg.at("beta_prior").value("scale", 10.0);
  return CoefficientPrior::gaussian(p, scale);
}

BvmThresholds parse_thresholds(const json& cfg) {
  BvmThresholds t;
  if (cfg.contains("diagnostics") && cfg.at("diagnostics").contains("thresholds")) {
    const json& th = cfg.at("diagnostics").at("thresholds");
    t.ks = th.value("ks", t.ks);
    t.cov_rel_err = th.value("cov_rel_err", t.cov_rel_err);
    t.mean_gap_factor = th.value("mean_gap_factor", t.mean_gap_factor);
  }
  return t;
}

int run_simulate(const json& cfg, int n, std::string beta0_csv,
                 std::uint64_t seed, const std::string& out,
                 const std::string& baseline, double rate, double shape,
                 const std::string& censoring, double censor_upper, double tau,
                 const std::string& covariates, double cov_low, double cov_high,
                 double cov_prob) {
  json sim = cfg.contains("data") && cfg.at("data").contains("simulate")
                 ? cfg.at("data").at("simulate")
                 : json::object();
  if (n > 0) sim["n"] = n;
  if (!beta0_csv.empty()) {
    std::vector<double> values;
    std::stringstream ss(beta0_csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    sim["beta0"] = values;
  }
  sim["seed"] = seed;
  if (!baseline.empty()) sim["baseline"]["family"] = baseline;
  if (rate > 0.0) sim["baseline"]["rate"] = rate;
  if (shape > 0.0) sim["baseline"]["shape"] = shape;
  if (!censoring.empty()) sim["censoring"]["family"] = censoring;
  if (censor_upper > 0.0) sim["censoring"]["upper"] = censor_upper;
  if (tau > 0.0) sim["tau"] = tau;
  if (!covariates.empty()) sim["covariates"]["family"] = covariates;
  if (cov_low < cov_high) {
    sim["covariates"]["low"] = cov_low;
    sim["covariates"]["high"] = cov_high;
  }
  if (cov_prob >= 0.0) sim["covariates"]["prob"] = cov_prob;

  const SurvivalDataset ds = simulate_ph_data(
      parse_model_spec(sim), sim.value("n", 100), sim.value("seed", std::uint64_t{1}));
  write_file(out, serialize_dataset(ds));
  std::cerr << "wrote " << ds.n() << " records to " << out << "\n";
  return 0;
}

int run_fit(const json& cfg, const std::string& data, double tau,
            const std::string& out) {
  const SurvivalDataset ds = load_data(cfg, data, tau);
  const PartialLikelihood lik(ds);
  const FitResult fit = fit_mle(lik);
  const std::string text = fit_to_json(fit, ds.p());
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

int run_posterior(const json& cfg, const std::string& data, double tau,
                  int draws, int burn_in, std::uint64_t seed, double epsilon,
                  int path_draws, const std::string& out,
                  const std::string& paths_out) {
  const SurvivalDataset ds = load_data(cfg, data, tau);
  const PriorConfig prior_cfg = parse_prior(cfg);
  const NiiPrior prior = build_prior(prior_cfg, ds.tau());
  const CoxPosterior posterior(ds, prior, parse_beta_prior(cfg, ds.p()));
  const FitResult fit = fit_mle(PartialLikelihood(ds));

  ChainConfig chain = parse_chain(cfg);
  if (draws > 0) chain.draws = draws;
  if (burn_in >= 0) chain.burn_in = burn_in;
  if (seed != 0) chain.seed = seed;
  const ChainResult result = sample_beta_posterior(posterior, fit, chain);

  std::string text = "draw";
  for (int k = 0; k < ds.p(); ++k) text += ",beta_" + std::to_string(k + 1);
  text += '\n';
  for (std::size_t d = 0; d < result.draws.size(); ++d) {
    text += std::to_string(d + 1);
    for (int k = 0; k < ds.p(); ++k) {
      text += ',';
      append_number(text, result.draws[d](k));
    }
    text += '\n';
  }
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);

  if (!paths_out.empty()) {
    const double eps = epsilon > 0.0 ? epsilon : prior_cfg.epsilon;
    const int wanted = path_draws > 0 ? path_draws : 100;
    const int grid_points =
        cfg.contains("diagnostics")
            ? cfg.at("diagnostics").value("grid_points", 10)
            : 10;
    const LimitFunctionals fn(ds, fit.beta_hat, fit.breslow);
    std::vector<double> grid;
    for (int j = 1; j <= grid_points; ++j)
      grid.push_back(fn.last_event_time() * j / grid_points);

    const int stride =
        std::max<int>(1, static_cast<int>(result.draws.size()) / wanted);
    std::string long_text = "draw,t,A\n";
    int written = 0;
    for (std::size_t d = 0; d < result.draws.size() && written < wanted;
         d += static_cast<std::size_t>(stride), ++written) {
      const HazardPath path = posterior.sample_path(
          result.draws[d], eps, derive_seed(chain.seed, 7000 + d));
      for (double t : grid) {
        long_text += std::to_string(written + 1);
        long_text += ',';
        append_number(long_text, t);
        long_text += ',';
        append_number(long_text, path(t));
        long_text += '\n';
      }
    }
    write_file(paths_out, long_text);
  }
  return 0;
}

int run_bvm_check(const json& cfg, const std::string& out,
                  const std::string& format, bool no_assert) {
  const SurvivalDataset ds = load_data(cfg, "", -1.0);
  const PriorConfig prior_cfg = parse_prior(cfg);
  const NiiPrior prior = build_prior(prior_cfg, ds.tau());

  BvmPipelineConfig pipeline;
  pipeline.chain = parse_chain(cfg);
  pipeline.thresholds = parse_thresholds(cfg);
  pipeline.epsilon = prior_cfg.epsilon;
  if (cfg.contains("diagnostics")) {
    const json& d = cfg.at("diagnostics");
    pipeline.grid_points = d.value("grid_points", pipeline.grid_points);
    pipeline.path_draws = d.value("path_draws", pipeline.path_draws);
  }

  const BvmReport report = run_bvm_pipeline(ds, prior, pipeline);
  const ReportFormat fmt =
      format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
  const std::string text = emit_report(report, fmt);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);

  const bool pass =
      report.beta.verdict && (!report.hazard || report.hazard->verdict);
  if (!pass && !no_assert) {
    std::cerr << "bvm-check: verdicts failed (beta "
              << (report.beta.verdict ? "pass" : "fail");
    if (report.hazard)
      std::cerr << ", hazard " << (report.hazard->verdict ? "pass" : "fail");
    std::cerr << ")\n";
    return 1;
  }
  return 0;
}

int run_coverage(const json& cfg, const std::string& out, bool no_assert) {
  if (!cfg.contains("data") || !cfg.at("data").contains("simulate"))
    throw ConfigError("coverage needs a data.simulate block");
  const json& sim = cfg.at("data").at("simulate");
  const TrueModelSpec spec = parse_model_spec(sim);
  const NiiPrior prior = build_prior(parse_prior(cfg), spec.tau);

  CoverageConfig config;
  if (cfg.contains("coverage")) {
    const json& c = cfg.at("coverage");
    config.replications = c.value("replications", config.replications);
    config.level = c.value("level", config.level);
    config.n = c.value("n", config.n);
    config.chain_draws = c.value("chain_draws", config.chain_draws);
    config.chain_burn_in = c.value("chain_burn_in", config.chain_burn_in);
    config.seed = c.value("seed", config.seed);
    config.threads = c.value("threads", config.threads);
  }
  const CoverageReport coverage = coverage_experiment(spec, prior, config);

  BvmReport report;
  report.n = config.n;
  report.p = static_cast<int>(spec.beta0.size());
  report.seed = config.seed;
  report.prior = prior.description();
  report.thresholds = parse_thresholds(cfg);
  report.beta.verdict = true;
  report.coverage = coverage;
  const std::string text = emit_report(report, ReportFormat::Json);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);

  bool pass = true;
  for (double rate : coverage.coverage)
    if (std::abs(rate - config.level) > 0.05) pass = false;
  if (!pass && !no_assert) {
    std::cerr << "coverage: empirical rate outside the +-0.05 band\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bayesian proportional-hazards inference with NII process priors on "
      "the baseline cumulative hazard"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")
      ->configurable(false);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "draw a synthetic dataset");
  int sim_n = 0;
  std::string sim_beta0;
  std::uint64_t sim_seed = 1;
  std::string sim_out = "data.csv";
  std::string sim_baseline, sim_censoring, sim_covariates;
  double sim_rate = 0.0, sim_shape = 0.0, sim_upper = 0.0, sim_tau = 0.0;
  double sim_cov_low = 0.0, sim_cov_high = 0.0, sim_cov_prob = -1.0;
  simulate->add_option("--n", sim_n, "number of records");
  simulate->add_option("--beta0", sim_beta0,
                       "true coefficients, comma separated");
  simulate->add_option("--seed", sim_seed, "rng seed");
  simulate->add_option("--out", sim_out, "output CSV path");
  simulate->add_option("--baseline", sim_baseline, "exponential|weibull");
  simulate->add_option("--rate", sim_rate, "baseline rate");
  simulate->add_option("--shape", sim_shape, "weibull shape");
  simulate->add_option("--censoring", sim_censoring, "none|uniform|point");
  simulate->add_option("--censor-upper", sim_upper,
                       "upper bound of the uniform censoring draw");
  simulate->add_option("--tau", sim_tau, "study horizon");
  simulate->add_option("--covariates", sim_covariates, "uniform|bernoulli");
  simulate->add_option("--cov-low", sim_cov_low, "uniform covariate lower bound");
  simulate->add_option("--cov-high", sim_cov_high, "uniform covariate upper bound");
  simulate->add_option("--cov-prob", sim_cov_prob, "bernoulli success probability");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "maximum partial likelihood fit");
  std::string fit_data, fit_out;
  double fit_tau = -1.0;
  fit_cmd->add_option("--data", fit_data, "input CSV");
  fit_cmd->add_option("--tau", fit_tau, "override the study horizon");
  fit_cmd->add_option("--out", fit_out, "output JSON path (stdout if empty)");

  // posterior
  auto* post = app.add_subcommand("posterior", "posterior sampling for beta and A");
  std::string post_data, post_out, post_paths;
  double post_tau = -1.0, post_eps = 0.0;
  int post_draws = 0, post_burn = -1, post_path_draws = 0;
  std::uint64_t post_seed = 0;
  post->add_option("--data", post_data, "input CSV");
  post->add_option("--tau", post_tau, "override the study horizon");
  post->add_option("--draws", post_draws, "chain length after burn-in");
  post->add_option("--burn-in", post_burn, "burn-in steps");
  post->add_option("--seed", post_seed, "chain seed");
  post->add_option("--epsilon", post_eps, "small-jump truncation level");
  post->add_option("--path-draws", post_path_draws, "hazard paths to dump");
  post->add_option("--out", post_out, "draws CSV path (stdout if empty)");
  post->add_option("--paths", post_paths, "long-format path CSV (draw,t,A)");

  // bvm-check
  auto* bvm = app.add_subcommand(
      "bvm-check", "posterior-vs-limit diagnostics on one dataset");
  std::string bvm_out, bvm_format = "json";
  bool bvm_no_assert = false;
  bvm->add_option("--out", bvm_out, "report path (stdout if empty)");
  bvm->add_option("--format", bvm_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  bvm->add_flag("--no-assert", bvm_no_assert,
                "exit 0 even when verdicts fail");

  // coverage
  auto* cov = app.add_subcommand("coverage",
                                 "credible-interval coverage experiment");
  std::string cov_out;
  bool cov_no_assert = false;
  cov->add_option("--out", cov_out, "report path (stdout if empty)");
  cov->add_flag("--no-assert", cov_no_assert,
                "exit 0 even when the rate leaves the +-0.05 band");

  // Let `levycox <sub> --config x` reach the app-level option too.
  for (auto* sub : {simulate, fit_cmd, post, bvm, cov}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 64;
  }

  try {
    const json cfg = load_config(config_path);
    if (simulate->parsed())
      return run_simulate(cfg, sim_n, sim_beta0, sim_seed, sim_out,
                          sim_baseline, sim_rate, sim_shape, sim_censoring,
                          sim_upper, sim_tau, sim_covariates, sim_cov_low,
                          sim_cov_high, sim_cov_prob);
    if (fit_cmd->parsed()) return run_fit(cfg, fit_data, fit_tau, fit_out);
    if (post->parsed())
      return run_posterior(cfg, post_data, post_tau, post_draws, post_burn,
                           post_seed, post_eps, post_path_draws, post_out,
                           post_paths);
    if (bvm->parsed()) return run_bvm_check(cfg, bvm_out, bvm_format, bvm_no_assert);
    if (cov->parsed()) return run_coverage(cfg, cov_out, cov_no_assert);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

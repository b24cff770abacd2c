#include <charconv>
#include <json.hpp>
#include <string>

#include "levycox/diagnostics.hpp"

namespace levycox {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const BvmReport& report) {
  ordered_json j;
  j["meta"] = {{"n", report.n},
               {"p", report.p},
               {"seed", report.seed},
               {"prior", report.prior},
               {"thresholds",
                {{"ks", report.thresholds.ks},
                 {"cov_rel_err", report.thresholds.cov_rel_err},
                 {"mean_gap_factor", report.thresholds.mean_gap_factor}}}};
  ordered_json beta;
  beta["ks"] = report.beta.ks;
  if (report.beta.l1) beta["l1"] = *report.beta.l1;
  if (report.beta.mahalanobis_ks)
    beta["mahalanobis_ks"] = *report.beta.mahalanobis_ks;
  beta["verdict"] = report.beta.verdict;
  j["beta"] = std::move(beta);
  if (report.hazard) {
    j["hazard"] = {{"grid", report.hazard->grid},
                   {"mean_gap", report.hazard->mean_gap},
                   {"cov_rel_err", report.hazard->cov_rel_err},
                   {"verdict", report.hazard->verdict}};
  }
  if (report.coverage) {
    j["coverage"] = {{"level", report.coverage->level},
                     {"rate", report.coverage->coverage},
                     {"width", report.coverage->mean_width},
                     {"replications", report.coverage->replications},
                     {"skipped", report.coverage->skipped}};
  }
  return j;
}

BvmReport from_json(const ordered_json& j) {
  BvmReport report;
  const auto& meta = j.at("meta");
  report.n = meta.at("n").get<int>();
  report.p = meta.at("p").get<int>();
  report.seed = meta.at("seed").get<std::uint64_t>();
  report.prior = meta.at("prior").get<std::string>();
  const auto& thresholds = meta.at("thresholds");
  report.thresholds.ks = thresholds.at("ks").get<double>();
  report.thresholds.cov_rel_err = thresholds.at("cov_rel_err").get<double>();
  report.thresholds.mean_gap_factor =
      thresholds.at("mean_gap_factor").get<double>();

  const auto& beta = j.at("beta");
  report.beta.ks = beta.at("ks").get<std::vector<double>>();
  if (beta.contains("l1")) report.beta.l1 = beta.at("l1").get<double>();
  if (beta.contains("mahalanobis_ks"))
    report.beta.mahalanobis_ks = beta.at("mahalanobis_ks").get<double>();
  report.beta.verdict = beta.at("verdict").get<bool>();

  if (j.contains("hazard")) {
    HazardCheck hazard;
    hazard.grid = j.at("hazard").at("grid").get<std::vector<double>>();
    hazard.mean_gap = j.at("hazard").at("mean_gap").get<double>();
    hazard.cov_rel_err = j.at("hazard").at("cov_rel_err").get<double>();
    hazard.verdict = j.at("hazard").at("verdict").get<bool>();
    report.hazard = std::move(hazard);
  }
  if (j.contains("coverage")) {
    CoverageReport coverage;
    coverage.level = j.at("coverage").at("level").get<double>();
    coverage.coverage = j.at("coverage").at("rate").get<std::vector<double>>();
    coverage.mean_width =
        j.at("coverage").at("width").get<std::vector<double>>();
    coverage.replications = j.at("coverage").at("replications").get<int>();
    coverage.skipped = j.at("coverage").at("skipped").get<int>();
    report.coverage = std::move(coverage);
  }
  return report;
}

void append_number(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

// Flat key,value table mirroring the JSON schema; array entries carry their
// index (beta.ks.0, ...).
std::string to_csv(const BvmReport& report) {
  std::string out = "key,value\n";
  auto put = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += ',';
    out += value;
    out += '\n';
  };
  auto put_num = [&out](const std::string& key, double value) {
    out += key;
    out += ',';
    append_number(out, value);
    out += '\n';
  };
  put("meta.n", std::to_string(report.n));
  put("meta.p", std::to_string(report.p));
  put("meta.seed", std::to_string(report.seed));
  put("meta.prior", report.prior);
  put_num("meta.thresholds.ks", report.thresholds.ks);
  put_num("meta.thresholds.cov_rel_err", report.thresholds.cov_rel_err);
  put_num("meta.thresholds.mean_gap_factor", report.thresholds.mean_gap_factor);
  for (std::size_t k = 0; k < report.beta.ks.size(); ++k)
    put_num("beta.ks." + std::to_string(k), report.beta.ks[k]);
  if (report.beta.l1) put_num("beta.l1", *report.beta.l1);
  if (report.beta.mahalanobis_ks)
    put_num("beta.mahalanobis_ks", *report.beta.mahalanobis_ks);
  put("beta.verdict", report.beta.verdict ? "true" : "false");
  if (report.hazard) {
    for (std::size_t k = 0; k < report.hazard->grid.size(); ++k)
      put_num("hazard.grid." + std::to_string(k), report.hazard->grid[k]);
    put_num("hazard.mean_gap", report.hazard->mean_gap);
    put_num("hazard.cov_rel_err", report.hazard->cov_rel_err);
    put("hazard.verdict", report.hazard->verdict ? "true" : "false");
  }
  if (report.coverage) {
    put_num("coverage.level", report.coverage->level);
    for (std::size_t k = 0; k < report.coverage->coverage.size(); ++k)
      put_num("coverage.rate." + std::to_string(k), report.coverage->coverage[k]);
    for (std::size_t k = 0; k < report.coverage->mean_width.size(); ++k)
      put_num("coverage.width." + std::to_string(k),
              report.coverage->mean_width[k]);
    put("coverage.replications", std::to_string(report.coverage->replications));
    put("coverage.skipped", std::to_string(report.coverage->skipped));
  }
  return out;
}

BvmReport from_csv(const std::string& text) {
  BvmReport report;
  HazardCheck hazard;
  bool has_hazard = false;
  CoverageReport coverage;
  bool has_coverage = false;

  std::size_t start = 0;
  bool header_seen = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "key,value") throw ParseError("report csv: bad header");
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("report csv: malformed line '" + line + "'");
    const std::string key = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    auto num = [&value, &key] {
      double v = 0.0;
      auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("report csv: bad number for " + key);
      return v;
    };
    auto flag = [&value] { return value == "true"; };

    if (key == "meta.n") report.n = static_cast<int>(num());
    else if (key == "meta.p") report.p = static_cast<int>(num());
    else if (key == "meta.seed") report.seed = std::stoull(value);
    else if (key == "meta.prior") report.prior = value;
    else if (key == "meta.thresholds.ks") report.thresholds.ks = num();
    else if (key == "meta.thresholds.cov_rel_err")
      report.thresholds.cov_rel_err = num();
    else if (key == "meta.thresholds.mean_gap_factor")
      report.thresholds.mean_gap_factor = num();
    else if (key.starts_with("beta.ks.")) report.beta.ks.push_back(num());
    else if (key == "beta.l1") report.beta.l1 = num();
    else if (key == "beta.mahalanobis_ks") report.beta.mahalanobis_ks = num();
    else if (key == "beta.verdict") report.beta.verdict = flag();
    else if (key.starts_with("hazard.grid.")) {
      hazard.grid.push_back(num());
      has_hazard = true;
    } else if (key == "hazard.mean_gap") {
      hazard.mean_gap = num();
      has_hazard = true;
    } else if (key == "hazard.cov_rel_err") {
      hazard.cov_rel_err = num();
      has_hazard = true;
    } else if (key == "hazard.verdict") {
      hazard.verdict = flag();
      has_hazard = true;
    } else if (key == "coverage.level") {
      coverage.level = num();
      has_coverage = true;
    } else if (key.starts_with("coverage.rate.")) {
      coverage.coverage.push_back(num());
      has_coverage = true;
    } else if (key.starts_with("coverage.width.")) {
      coverage.mean_width.push_back(num());
      has_coverage = true;
    } else if (key == "coverage.replications") {
      coverage.replications = static_cast<int>(num());
      has_coverage = true;
    } else if (key == "coverage.skipped") {
      coverage.skipped = static_cast<int>(num());
      has_coverage = true;
    } else {
      throw ParseError("report csv: unknown key '" + key + "'");
    }
  }
  if (!header_seen) throw ParseError("report csv: empty document");
  if (has_hazard) report.hazard = std::move(hazard);
  if (has_coverage) report.coverage = std::move(coverage);
  return report;
}

}  // namespace

std::string emit_report(const BvmReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) return to_csv(report);
  return to_json(report).dump(2) + "\n";
}

BvmReport parse_report(const std::string& text, ReportFormat format) {
  if (format == ReportFormat::Csv) return from_csv(text);
  try {
    return from_json(ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report json: ") + e.what());
  }
}

}  // namespace levycox

#include "eigadm/report.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "eigadm/error.h"

namespace eigadm {

namespace {

using nlohmann::json;

// JSON has no inf/nan; those travel as strings.
json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw Error(Errc::invalid_input, "report: unexpected number token '" + s + "'");
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw Error(Errc::invalid_config, "unknown report format '" + std::string(name) + "'");
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_pattern(const Spectrum& lambda) {
  std::string out;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i > 0) out += '|';
    std::string v = format_double(lambda[i]);
    if (v.find_first_of(".e") == std::string::npos) v += ".0";
    out += v;
  }
  return out;
}

std::string report_to_csv(const RiskReport& report) {
  std::ostringstream os;
  os << "pattern,nu,estimator,risk,std_error,n_rep\n";
  for (const auto& row : report.rows) {
    os << format_pattern(row.lambda) << ',' << row.nu << ',' << to_string(row.estimator) << ','
       << format_double(row.risk.mean_loss) << ',' << format_double(row.risk.std_error) << ','
       << row.risk.n_rep << '\n';
  }
  return os.str();
}

std::string report_to_json(const RiskReport& report) {
  json doc;
  doc["metadata"] = {
      {"seed", report.metadata.seed},         {"n_points", report.metadata.n_points},
      {"n_rep", report.metadata.n_rep},       {"version", report.metadata.version},
      {"wall_ms", report.metadata.wall_ms},
  };
  json rows = json::array();
  for (const auto& row : report.rows) {
    json lambda = json::array();
    for (double v : row.lambda.values()) lambda.push_back(v);
    const auto& r = row.risk;
    rows.push_back({
        {"lambda", lambda},
        {"nu", row.nu},
        {"estimator", to_string(row.estimator)},
        {"risk", number_to_json(r.mean_loss)},
        {"std_error", number_to_json(r.std_error)},
        {"n_rep", r.n_rep},
        {"ess_min", r.ess_min ? number_to_json(*r.ess_min) : json(nullptr)},
        {"nonfinite_count", r.nonfinite_count},
        {"tail_threshold", number_to_json(r.tail_threshold)},
        {"tail_count", r.tail_count},
        {"tail_share", number_to_json(r.tail_share)},
    });
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

RiskReport report_from_json(const std::string& text) {
  RiskReport report;
  try {
    const json doc = json::parse(text);
    const auto& meta = doc.at("metadata");
    report.metadata.seed = meta.at("seed").get<std::uint64_t>();
    report.metadata.n_points = meta.at("n_points").get<std::size_t>();
    report.metadata.n_rep = meta.at("n_rep").get<std::size_t>();
    report.metadata.version = meta.at("version").get<std::string>();
    report.metadata.wall_ms = meta.at("wall_ms").get<std::int64_t>();
    for (const auto& row : doc.at("rows")) {
      RiskEstimate r;
      r.mean_loss = number_from_json(row.at("risk"));
      r.std_error = number_from_json(row.at("std_error"));
      r.n_rep = row.value("n_rep", report.metadata.n_rep);
      if (row.contains("ess_min") && !row.at("ess_min").is_null()) {
        r.ess_min = number_from_json(row.at("ess_min"));
      }
      r.nonfinite_count = row.value("nonfinite_count", std::size_t{0});
      if (row.contains("tail_threshold")) r.tail_threshold = number_from_json(row.at("tail_threshold"));
      r.tail_count = row.value("tail_count", std::size_t{0});
      if (row.contains("tail_share")) r.tail_share = number_from_json(row.at("tail_share"));
      report.rows.push_back({Spectrum::population(row.at("lambda").get<std::vector<double>>()),
                             row.at("nu").get<int>(),
                             parse_estimator(row.at("estimator").get<std::string>()), r});
    }
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_input, std::string("report: malformed JSON: ") + e.what());
  }
  return report;
}

void write_report(const RiskReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
  const std::string body =
      format == ReportFormat::csv ? report_to_csv(report) : report_to_json(report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open '" + path.string() + "' for writing");
  out << body;
  out.flush();
  if (!out) throw Error(Errc::io_failure, "failed writing '" + path.string() + "'");
}

RiskReport read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return report_from_json(ss.str());
}

}  // namespace eigadm

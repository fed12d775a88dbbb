#pragma once

#include <filesystem>
#include <string>

#include "eigadm/risk.h"

namespace eigadm {

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view name);

/// Shortest decimal string that parses back to `value`.
std::string format_double(double value);

/// Lambda pattern as "1.0|0.8": descending values joined by '|', each with
/// at least one fractional digit.
std::string format_pattern(const Spectrum& lambda);

/// `pattern,nu,estimator,risk,std_error,n_rep` header plus one line per row.
std::string report_to_csv(const RiskReport& report);

/// {metadata:{seed,n_points,n_rep,version,wall_ms}, rows:[{lambda,nu,
/// estimator,risk,std_error,...}]}. Rows also carry n_rep, ess_min and the
/// heavy-tail fields so the document parses back to an equal report.
std::string report_to_json(const RiskReport& report);
RiskReport report_from_json(const std::string& text);

/// Throws Error(io_failure) naming the path on any I/O problem.
void write_report(const RiskReport& report, const std::filesystem::path& path,
                  ReportFormat format);
RiskReport read_report_json(const std::filesystem::path& path);

}  // namespace eigadm

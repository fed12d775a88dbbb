#include "eigadm/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "eigadm/error.h"
#include "eigadm/estimator.h"
#include "eigadm/report.h"
#include "eigadm/risk.h"
#include "eigadm/sampling.h"
#include "eigadm/selftest.h"

namespace eigadm::cli {

namespace {

using nlohmann::json;

/// Failure carrying its exit code up to run().
struct CliFailure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw CliFailure{code, std::move(message)}; }

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::io_failure: return kIo;
    default: return kUsage;
  }
}

std::vector<double> parse_numbers(std::string_view text, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ',' || text[pos] == ' ' || text[pos] == '\t' ||
                                 text[pos] == '\r')) {
      ++pos;
    }
    if (pos == text.size()) break;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc() || ptr == text.data() + pos) {
      fail(kUsage, "cannot parse a number in " + what + " near '" +
                       std::string(text.substr(pos, 16)) + "'");
    }
    out.push_back(v);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  return out;
}

/// Command-line flags plus an optional JSON config file; explicit flags win.
struct Settings {
  std::string config_path;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::size_t n_rep = 10000;
  std::size_t n_points = 1000;
  bool antithetic = false;
  std::string tau_points = "fresh";
  int nu = 0;
  std::size_t p = 0;
  std::string lambda;
  std::string estimator = "psi_star";
  std::vector<std::string> estimators{"psi_star", "phi_star"};
  int table = 0;
  std::string input;
  std::string out;
  std::string format;
  bool timing = false;
};

template <class T>
void merge(const json& cfg, const char* key, const CLI::Option* flag, T& target) {
  if (flag != nullptr && flag->count() > 0) return;
  if (!cfg.contains(key)) return;
  try {
    target = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(kUsage, std::string("config key '") + key + "': " + e.what());
  }
}

void apply_config(Settings& s, const CLI::App& cmd) {
  if (s.config_path.empty()) return;
  std::ifstream in(s.config_path);
  if (!in) fail(kIo, "cannot open config file '" + s.config_path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    fail(kUsage, "config file '" + s.config_path + "' is not valid JSON: " + e.what());
  }
  auto flag = [&](const char* name) -> const CLI::Option* {
    try {
      return cmd.get_option(name);
    } catch (const CLI::OptionNotFound&) {
      return nullptr;
    }
  };
  merge(cfg, "seed", flag("--seed"), s.seed);
  merge(cfg, "threads", flag("--threads"), s.threads);
  merge(cfg, "n_rep", flag("--n-rep"), s.n_rep);
  merge(cfg, "n_points", flag("--n-points"), s.n_points);
  merge(cfg, "antithetic", flag("--antithetic"), s.antithetic);
  merge(cfg, "tau_points", flag("--tau-points"), s.tau_points);
  merge(cfg, "nu", flag("--nu"), s.nu);
  merge(cfg, "p", flag("--p"), s.p);
  merge(cfg, "estimator", flag("--estimator"), s.estimator);
  merge(cfg, "estimators", flag("--estimators"), s.estimators);
  merge(cfg, "table", flag("--table"), s.table);
  merge(cfg, "input", flag("--input"), s.input);
  merge(cfg, "out", flag("--out"), s.out);
  merge(cfg, "format", flag("--format"), s.format);
  const auto* lambda_flag = flag("--lambda");
  if ((lambda_flag == nullptr || lambda_flag->count() == 0) && cfg.contains("lambda")) {
    const auto& v = cfg.at("lambda");
    if (v.is_string()) {
      s.lambda = v.get<std::string>();
    } else {
      std::string joined;
      for (const auto& x : v) {
        if (!joined.empty()) joined += ',';
        joined += format_double(x.get<double>());
      }
      s.lambda = joined;
    }
  }
}

McConfig mc_config(const Settings& s) {
  McConfig mc;
  mc.n_points = s.n_points;
  mc.antithetic = s.antithetic;
  return mc;
}

void emit(const std::string& body, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << body;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(kIo, "cannot open '" + path + "' for writing");
  f << body;
  f.flush();
  if (!f) fail(kIo, "failed writing '" + path + "'");
}

ReportFormat output_format(const Settings& s, ReportFormat fallback) {
  if (s.format.empty()) {
    if (s.out.size() > 5 && s.out.ends_with(".json")) return ReportFormat::json;
    if (s.out.size() > 4 && s.out.ends_with(".csv")) return ReportFormat::csv;
    return fallback;
  }
  return parse_report_format(s.format);
}

// estimate -------------------------------------------------------------------

struct EstimateInput {
  bool is_matrix = false;
  std::vector<double> spectrum;
  Matrix matrix;
};

EstimateInput read_estimate_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kIo, "cannot open input file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    rows.push_back(parse_numbers(line, "'" + path + "'"));
  }
  if (rows.empty()) fail(kUsage, "input file '" + path + "' holds no numbers");

  EstimateInput input;
  if (rows.size() == 1) {
    input.spectrum = rows.front();
    return input;
  }
  const std::size_t p = rows.size();
  input.is_matrix = true;
  input.matrix = Matrix(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    if (rows[i].size() != p) {
      fail(kUsage, "input file '" + path + "': expected a " + std::to_string(p) + "x" +
                       std::to_string(p) + " matrix, row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " values");
    }
    for (std::size_t j = 0; j < p; ++j) input.matrix(i, j) = rows[i][j];
  }
  return input;
}

Spectrum spectrum_from_input(const EstimateInput& input) {
  if (input.is_matrix) {
    SymmetricMatrix sym(input.matrix.rows());
    try {
      sym = SymmetricMatrix::from_matrix(input.matrix, 1e-12);
    } catch (const Error& e) {
      fail(kNotSymmetric, e.what());
    }
    return eig_sym_desc(sym);
  }
  const auto& v = input.spectrum;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) {
      fail(kNotDescending, "spectrum is not in descending order at position " +
                               std::to_string(i + 1));
    }
  }
  return Spectrum::sample(v);
}

json to_json_array(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

int cmd_estimate(const Settings& s, std::ostream& out) {
  if (s.input.empty()) fail(kUsage, "estimate requires --input");
  const auto input = read_estimate_input(s.input);
  const Spectrum l = spectrum_from_input(input);
  if (s.nu < 1 || static_cast<std::size_t>(s.nu) < l.size()) {
    fail(kNuBelowP, "nu must be at least p (nu=" + std::to_string(s.nu) +
                        ", p=" + std::to_string(l.size()) + ")");
  }
  RngStream stream(s.seed, 0);
  const auto est = estimate_psi_star(l, s.nu, mc_config(s), stream);

  json tau = json::array();
  std::vector<double> row_sums;
  for (std::size_t i = 0; i < l.size(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < l.size(); ++j) row.push_back(est.tau(i, j));
    tau.push_back(row);
    row_sums.push_back(est.tau.row_sum(i));
  }
  json doc = {
      {"input", input.is_matrix ? "matrix" : "spectrum"},
      {"nu", s.nu},
      {"seed", s.seed},
      {"n_points", s.n_points},
      {"antithetic", s.antithetic},
      {"l", to_json_array(l.values())},
      {"tau", tau},
      {"tau_row_sums", row_sums},
      {"psi_star", est.psi},
      {"phi_star", phi_star(l, s.nu)},
      {"mle", mle(l, s.nu)},
      {"ess", est.row_ess},
  };
  emit(doc.dump(2) + "\n", s.out, out);
  return kOk;
}

// risk / tables --------------------------------------------------------------

std::string render(const RiskReport& report, ReportFormat format) {
  return format == ReportFormat::csv ? report_to_csv(report) : report_to_json(report);
}

int cmd_risk(const Settings& s, std::ostream& out) {
  if (s.lambda.empty()) fail(kUsage, "risk requires --lambda");
  if (s.nu == 0) fail(kUsage, "risk requires --nu");
  const auto values = parse_numbers(s.lambda, "--lambda");
  if (s.p != 0 && s.p != values.size()) {
    fail(kUsage, "--p " + std::to_string(s.p) + " does not match " +
                     std::to_string(values.size()) + " lambda values");
  }
  Scenario scenario;
  scenario.lambda = Spectrum::population(values);
  scenario.nu = s.nu;
  scenario.n_rep = s.n_rep;
  scenario.mc = mc_config(s);
  scenario.seed = s.seed;
  scenario.estimator = parse_estimator(s.estimator);
  scenario.tau_points = parse_tau_points(s.tau_points);
  scenario.threads = s.threads;

  const auto start = std::chrono::steady_clock::now();
  RiskReport report;
  report.metadata = {s.seed, s.n_points, s.n_rep, std::string(library_version()), 0};
  report.rows.push_back({scenario.lambda, scenario.nu, scenario.estimator, simulate_risk(scenario)});
  if (s.timing) {
    report.metadata.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
  }
  emit(render(report, output_format(s, ReportFormat::csv)), s.out, out);
  return kOk;
}

int cmd_tables(const Settings& s, std::ostream& out) {
  if (s.table != 1 && s.table != 2) fail(kUsage, "tables requires --table 1 or --table 2");
  TableOptions options;
  options.seed = s.seed;
  options.n_rep = s.n_rep;
  options.mc = mc_config(s);
  options.tau_points = parse_tau_points(s.tau_points);
  options.threads = s.threads;
  options.estimators.clear();
  for (const auto& name : s.estimators) options.estimators.push_back(parse_estimator(name));

  const auto start = std::chrono::steady_clock::now();
  RiskReport report = reproduce_tables(s.table, options);
  if (s.timing) {
    report.metadata.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
  }
  emit(render(report, output_format(s, ReportFormat::csv)), s.out, out);
  return kOk;
}

int cmd_selftest(const Settings& s, std::ostream& out) {
  SelftestOptions options;
  options.seed = s.seed;
  options.threads = s.threads;
  const auto report = run_selftest(options);
  for (const auto& check : report.checks) {
    out << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
  }
  out << (report.passed() ? "selftest passed" : "selftest FAILED") << '\n';
  return report.passed() ? kOk : kTestFailure;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("EIGADM_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const std::string_view text(raw);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(kUsage, "EIGADM_SEED is not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Admissible covariance eigenvalue estimation and risk simulation", "eigadm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  Settings s;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", s.config_path, "JSON config file; explicit flags take precedence");
    cmd->add_option("--seed", s.seed, "Root seed (default: $EIGADM_SEED, else 42)");
  };
  auto add_mc = [&](CLI::App* cmd) {
    cmd->add_option("--n-points", s.n_points, "Monte Carlo points per tau integral")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--antithetic", s.antithetic, "Use antithetic order-statistic pairs");
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", s.out, "Output path (default: stdout)");
    cmd->add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--n-rep", s.n_rep, "Wishart replicates")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", s.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--tau-points", s.tau_points, "fresh or frozen")
        ->check(CLI::IsMember({"fresh", "frozen"}));
    cmd->add_flag("--timing", s.timing, "Record wall time in the report metadata");
  };

  auto* estimate = app.add_subcommand("estimate", "Estimate eigenvalues from a spectrum or matrix file");
  add_common(estimate);
  add_mc(estimate);
  estimate->add_option("--input", s.input, "Spectrum (one line) or symmetric matrix (p lines)");
  estimate->add_option("--nu", s.nu, "Degrees of freedom");
  estimate->add_option("--out", s.out, "Output JSON path (default: stdout)");

  auto* risk = app.add_subcommand("risk", "Simulate the risk of one estimator");
  add_common(risk);
  add_mc(risk);
  add_sim(risk);
  add_output(risk);
  risk->add_option("--p", s.p, "Dimension (must match --lambda)");
  risk->add_option("--nu", s.nu, "Degrees of freedom");
  risk->add_option("--lambda", s.lambda, "Comma-separated descending population eigenvalues");
  risk->add_option("--estimator", s.estimator, "psi_star, phi_star or mle")
      ->check(CLI::IsMember({"psi_star", "phi_star", "mle"}));

  auto* tables = app.add_subcommand("tables", "Reproduce a published risk table");
  add_common(tables);
  add_mc(tables);
  add_sim(tables);
  add_output(tables);
  tables->add_option("--table", s.table, "Table id (1: p=2, 2: p=3)");
  tables->add_option("--estimators", s.estimators, "Estimators to simulate")
      ->check(CLI::IsMember({"psi_star", "phi_star", "mle"}));

  auto* selftest = app.add_subcommand("selftest", "Run the fast invariant suite");
  add_common(selftest);
  selftest->add_option("--threads", s.threads, "Worker threads (0 = all cores)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForVersion&) {
      out << library_version() << '\n';
      return kOk;
    } catch (const CLI::ParseError& e) {
      std::string msg = e.what();
      for (char& c : msg)
        if (c == '\n') c = ' ';
      fail(kUsage, msg);
    }

    CLI::App* cmd = app.get_subcommands().front();
    const auto* seed_flag = cmd->get_option("--seed");
    if (seed_flag->count() == 0) {
      if (auto env = env_seed()) s.seed = *env;
    }
    apply_config(s, *cmd);

    if (cmd == estimate) return cmd_estimate(s, out);
    if (cmd == risk) return cmd_risk(s, out);
    if (cmd == tables) return cmd_tables(s, out);
    return cmd_selftest(s, out);
  } catch (const CliFailure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace eigadm::cli

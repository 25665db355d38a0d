#pragma once

// Parameter sweeps, figure presets, CSV emission and the engine-vs-oracle
// comparison behind the `psqm` command-line tool.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace psqm::experiments {

enum class Flag { Ok, Singular, OutOfRange, Precision };
std::string_view to_string(Flag f);

struct Axis {
  std::string name;  // lambda, mu, phi, eta, psi, one_minus_tau, m, n
  std::vector<double> values;
};

struct SweepConfig {
  std::string name = "sweep";
  Axis axis;
  std::vector<int> m_values{0};
  std::vector<std::string> metrics;
  // More than one value repeats every metric per value, labelled
  // "metric[lambda=value]".
  std::vector<double> lambdas{1.0};
  double mu = 0.0;
  double psi = 0.0;
  double phi = 1.5707963267948966;
  double eta = 1.0;
  double chi = 0.0;
  // lambda is the common mean photon number after subtraction; each m uses
  // the pre-subtraction lambda that reaches it.
  bool balanced = false;
  std::optional<unsigned> precision_digits;
  std::optional<int> cutoff;
  std::string output;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Row {
  double swept_value = 0.0;
  int m = 0;
  std::string metric;
  double value = 0.0;
  Flag flag = Flag::Ok;
  std::string detail;  // error message for flagged rows
};

struct SweepResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string swept_param;
  std::vector<Row> rows;
};

// Known metric names and a one-line description each.
const std::vector<std::pair<std::string, std::string>>& metric_catalog();

// Parses the JSON configuration; throws Error(ConfigInvalid) naming the
// offending field.
SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);
// Field-level checks shared by parsed and preset configurations.
void validate(const SweepConfig& cfg);

SweepResult run_sweep(const SweepConfig& cfg);

std::vector<std::string> preset_names();
SweepConfig preset_config(const std::string& name);  // UnknownPreset
SweepResult run_preset(const std::string& name);

void write_csv(const SweepResult& result, std::ostream& out);
std::string format_value(double v);

// Working precision for a run: environment variable, then config, then the
// library default.
unsigned resolve_digits(const std::optional<unsigned>& configured);

// ---- oracle comparison -----------------------------------------------------

struct OracleCompareConfig {
  std::string scene = "correlated";  // or "single"
  double lambda = 0.3;
  int m = 1;
  double mu = 2.0;
  double psi = 1.5707963267948966;
  double phi = 1.0;  // both interferometers in the correlated scene
  double eta = 1.0;
  double chi = 0.0;
  double tolerance = 1e-8;
  std::size_t max_entries = std::size_t{1} << 24;
};

struct CompareRow {
  std::string quantity;
  double engine = 0.0;
  double oracle = 0.0;
  double relative_error = 0.0;
};

struct OracleReport {
  std::vector<CompareRow> rows;
  double tolerance = 0.0;
  bool passed() const;
  double worst() const;
};

OracleCompareConfig parse_oracle_config(const std::string& text);
OracleCompareConfig load_oracle_config(const std::string& path);
OracleReport oracle_compare(const OracleCompareConfig& cfg);
void write_report(const OracleReport& report, std::ostream& out);

// |a - b| / max(|a|, |b|), with exact agreement (including two zeros) at 0.
double relative_error(double a, double b);

}  // namespace psqm::experiments

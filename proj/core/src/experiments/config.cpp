#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "psqm/errors.hpp"
#include "psqm/experiments.hpp"
#include "psqm/numeric.hpp"

namespace psqm::experiments {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
  raise(ErrorKind::ConfigInvalid, "field '" + field + "': " + msg);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) invalid(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(field, "must be finite");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) invalid(field, "expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& field) {
  if (!j.is_string()) invalid(field, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& field) {
  if (!j.is_array()) invalid(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

// [start, stop, count]
std::vector<double> spaced(const json& j, const std::string& field, bool logarithmic) {
  const auto v = numbers(j, field);
  if (v.size() != 3) invalid(field, "expected [start, stop, count]");
  const double n = v[2];
  if (n < 1 || n != std::floor(n) || n > 1e6) invalid(field, "count must be a positive integer");
  const auto count = static_cast<int>(n);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const double x = v[0] + (v[1] - v[0]) * t;
    out.push_back(logarithmic ? std::pow(10.0, x) : x);
  }
  return out;
}

const std::set<std::string>& axis_names() {
  static const std::set<std::string> names{"lambda", "mu", "phi", "eta", "psi", "one_minus_tau", "m", "n"};
  return names;
}

const std::set<std::string>& known_fields() {
  static const std::set<std::string> names{
      "preset", "name",     "axis",     "values", "linspace", "logspace",         "m",      "metrics",
      "lambda", "mu",       "psi",      "phi",    "eta",      "chi",              "balanced", "precision_digits",
      "cutoff", "output",   "threads"};
  return names;
}

bool is_integral(double x) { return x == std::floor(x); }

}  // namespace

void validate(const SweepConfig& cfg) {
  if (!axis_names().count(cfg.axis.name)) invalid("axis", "unknown axis '" + cfg.axis.name + "'");
  if (cfg.axis.values.empty()) invalid("values", "the swept axis has no values");
  for (double v : cfg.axis.values) {
    if (!std::isfinite(v)) invalid("values", "non-finite axis value");
    const std::string& a = cfg.axis.name;
    if ((a == "lambda" || a == "mu") && v < 0) invalid("values", a + " must be non-negative");
    if (a == "eta" && (v < 0 || v > 1)) invalid("values", "eta must lie in [0, 1]");
    if (a == "one_minus_tau" && (v < 0 || v > 1)) invalid("values", "1 - tau must lie in [0, 1]");
    if ((a == "m" || a == "n") && (v < 0 || !is_integral(v) || v > 200)) {
      invalid("values", a + " must be an integer in [0, 200]");
    }
  }
  if (cfg.m_values.empty()) invalid("m", "empty list");
  for (int m : cfg.m_values) {
    if (m < 0 || m > 200) invalid("m", "photon subtraction order must lie in [0, 200]");
  }
  if (cfg.metrics.empty()) invalid("metrics", "no metric requested");
  for (const auto& name : cfg.metrics) {
    bool found = false;
    for (const auto& [known, _] : metric_catalog()) found = found || known == name;
    if (!found) invalid("metrics", "unknown metric '" + name + "'");
  }
  if (cfg.lambdas.empty()) invalid("lambda", "empty list");
  for (double l : cfg.lambdas) {
    if (!std::isfinite(l) || l < 0) invalid("lambda", "must be finite and non-negative");
  }
  if (!std::isfinite(cfg.mu) || cfg.mu < 0) invalid("mu", "must be finite and non-negative");
  if (!std::isfinite(cfg.eta) || cfg.eta < 0 || cfg.eta > 1) invalid("eta", "must lie in [0, 1]");
  if (!std::isfinite(cfg.phi)) invalid("phi", "must be finite");
  if (!std::isfinite(cfg.psi)) invalid("psi", "must be finite");
  if (!std::isfinite(cfg.chi)) invalid("chi", "must be finite");
  if (cfg.precision_digits && (*cfg.precision_digits < 17 || *cfg.precision_digits > 2000)) {
    invalid("precision_digits", "must lie in [17, 2000]");
  }
  if (cfg.cutoff && *cfg.cutoff < 0) invalid("cutoff", "must be non-negative");
  if (cfg.threads > 256) invalid("threads", "at most 256");
}

SweepConfig parse_config(const std::string& content) {
  json j;
  try {
    j = json::parse(content);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::ConfigInvalid, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) raise(ErrorKind::ConfigInvalid, "top level must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known_fields().count(key)) invalid(key, "unknown field");
  }

  SweepConfig cfg;
  if (j.contains("preset")) {
    try {
      cfg = preset_config(text(j["preset"], "preset"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::UnknownPreset) invalid("preset", e.what());
      throw;
    }
  }
  if (j.contains("name")) cfg.name = text(j["name"], "name");

  if (j.contains("axis")) {
    cfg.axis.name = text(j["axis"], "axis");
    cfg.axis.values.clear();
  }
  int sources = 0;
  if (j.contains("values")) {
    cfg.axis.values = numbers(j["values"], "values");
    ++sources;
  }
  if (j.contains("linspace")) {
    cfg.axis.values = spaced(j["linspace"], "linspace", false);
    ++sources;
  }
  if (j.contains("logspace")) {
    cfg.axis.values = spaced(j["logspace"], "logspace", true);
    ++sources;
  }
  if (sources > 1) invalid("values", "give exactly one of values, linspace, logspace");
  if (cfg.axis.name.empty()) invalid("axis", "missing");

  if (j.contains("m")) {
    const json& m = j["m"];
    cfg.m_values.clear();
    if (m.is_array()) {
      for (std::size_t i = 0; i < m.size(); ++i) cfg.m_values.push_back(integer(m[i], "m[" + std::to_string(i) + "]"));
    } else {
      cfg.m_values.push_back(integer(m, "m"));
    }
  }
  if (j.contains("metrics")) {
    const json& m = j["metrics"];
    if (!m.is_array()) invalid("metrics", "expected an array of names");
    cfg.metrics.clear();
    for (std::size_t i = 0; i < m.size(); ++i) cfg.metrics.push_back(text(m[i], "metrics[" + std::to_string(i) + "]"));
  }
  if (j.contains("lambda")) {
    const json& l = j["lambda"];
    cfg.lambdas = l.is_array() ? numbers(l, "lambda") : std::vector<double>{number(l, "lambda")};
  }
  if (j.contains("mu")) cfg.mu = number(j["mu"], "mu");
  if (j.contains("psi")) cfg.psi = number(j["psi"], "psi");
  if (j.contains("phi")) cfg.phi = number(j["phi"], "phi");
  if (j.contains("eta")) cfg.eta = number(j["eta"], "eta");
  if (j.contains("chi")) cfg.chi = number(j["chi"], "chi");
  if (j.contains("balanced")) {
    if (!j["balanced"].is_boolean()) invalid("balanced", "expected true or false");
    cfg.balanced = j["balanced"].get<bool>();
  }
  if (j.contains("precision_digits")) {
    const int d = integer(j["precision_digits"], "precision_digits");
    if (d < 17 || d > 2000) invalid("precision_digits", "must lie in [17, 2000]");
    cfg.precision_digits = static_cast<unsigned>(d);
  }
  if (j.contains("cutoff")) cfg.cutoff = integer(j["cutoff"], "cutoff");
  if (j.contains("output")) cfg.output = text(j["output"], "output");
  if (j.contains("threads")) {
    const int t = integer(j["threads"], "threads");
    if (t < 0) invalid("threads", "must be non-negative");
    cfg.threads = static_cast<unsigned>(t);
  }
  validate(cfg);
  return cfg;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ConfigInvalid, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SweepConfig load_config(const std::string& path) { return parse_config(slurp(path)); }

unsigned resolve_digits(const std::optional<unsigned>& configured) {
  const char* env = std::getenv(kPrecisionEnvVar);
  if (env != nullptr && *env != '\0') return digits_from_environment();
  return configured.value_or(kDefaultWorkingDigits);
}

// ---- oracle comparison config ----------------------------------------------

OracleCompareConfig parse_oracle_config(const std::string& content) {
  json j;
  try {
    j = json::parse(content);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::ConfigInvalid, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) raise(ErrorKind::ConfigInvalid, "top level must be an object");
  static const std::set<std::string> fields{"scene", "lambda", "m",   "mu",        "psi",        "phi",
                                            "eta",    "chi", "tolerance", "max_entries"};
  for (const auto& [key, _] : j.items()) {
    if (!fields.count(key)) invalid(key, "unknown field");
  }
  OracleCompareConfig cfg;
  if (j.contains("scene")) cfg.scene = text(j["scene"], "scene");
  if (cfg.scene != "single" && cfg.scene != "correlated") invalid("scene", "expected 'single' or 'correlated'");
  if (j.contains("lambda")) cfg.lambda = number(j["lambda"], "lambda");
  if (j.contains("m")) cfg.m = integer(j["m"], "m");
  if (j.contains("mu")) cfg.mu = number(j["mu"], "mu");
  if (j.contains("psi")) cfg.psi = number(j["psi"], "psi");
  if (j.contains("phi")) cfg.phi = number(j["phi"], "phi");
  if (j.contains("eta")) cfg.eta = number(j["eta"], "eta");
  if (j.contains("chi")) cfg.chi = number(j["chi"], "chi");
  if (j.contains("tolerance")) cfg.tolerance = number(j["tolerance"], "tolerance");
  if (j.contains("max_entries")) {
    const json& e = j["max_entries"];
    if (!e.is_number_unsigned() || e.get<std::uint64_t>() == 0) invalid("max_entries", "expected a positive integer");
    cfg.max_entries = e.get<std::size_t>();
  }
  if (cfg.lambda < 0) invalid("lambda", "must be non-negative");
  if (cfg.m < 0 || cfg.m > 20) invalid("m", "must lie in [0, 20]");
  if (cfg.mu < 0 || cfg.mu > 10) invalid("mu", "the oracle accepts mu in [0, 10]");
  if (cfg.eta < 0 || cfg.eta > 1) invalid("eta", "must lie in [0, 1]");
  if (!(cfg.tolerance > 0)) invalid("tolerance", "must be positive");
  return cfg;
}

OracleCompareConfig load_oracle_config(const std::string& path) { return parse_oracle_config(slurp(path)); }

}  // namespace psqm::experiments

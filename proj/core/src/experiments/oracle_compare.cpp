#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>

#include "psqm/errors.hpp"
#include "psqm/experiments.hpp"
#include "psqm/metrology.hpp"
#include "psqm/oracle.hpp"
#include "psqm/states.hpp"

namespace psqm::experiments {

namespace {

constexpr double kOracleTail = 1e-16;

std::string moment_name(const char* a, const char* b, int p, int q) {
  std::string s = "<";
  if (p > 0) s += std::string(a) + (p > 1 ? "^" + std::to_string(p) : "");
  if (p > 0 && q > 0) s += " ";
  if (q > 0) s += std::string(b) + (q > 1 ? "^" + std::to_string(q) : "");
  return s + ">";
}

void add_moments(OracleReport& rep, const ReadoutMoments& engine, const fock::ReadoutStatistics& oracle,
                 const char* a, const char* b) {
  for (const auto& [pq, value] : engine) {
    if (pq.first + pq.second == 0) continue;
    const double o = oracle.moment(pq.first, pq.second);
    rep.rows.push_back({moment_name(a, b, pq.first, pq.second), value, o, relative_error(value, o)});
  }
}

}  // namespace

double relative_error(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

bool OracleReport::passed() const { return worst() <= tolerance; }

double OracleReport::worst() const {
  double w = 0.0;
  for (const auto& r : rows) w = std::isfinite(r.relative_error) ? std::max(w, r.relative_error) : INFINITY;
  return w;
}

OracleReport oracle_compare(const OracleCompareConfig& cfg) {
  OracleReport rep;
  rep.tolerance = cfg.tolerance;
  const fock::CutoffPolicy policy{std::nullopt, kOracleTail};
  const std::complex<double> alpha = std::polar(std::sqrt(cfg.mu), cfg.psi);
  if (cfg.scene == "single") {
    const SingleMziConfig c{{cfg.lambda, cfg.m, cfg.chi}, cfg.mu, cfg.psi, cfg.phi, cfg.eta};
    const auto quantum = states::passv(c.input, policy);
    const auto stats = fock::oracle_interferometer(fock::OracleSingleScene{quantum, alpha, cfg.phi, cfg.eta},
                                                   cfg.max_entries);
    add_moments(rep, readout_moments(c), stats, "Nc", "Nd");
    const double fe = qfi(c);
    const double fo = fock::oracle_qfi(quantum, alpha, cfg.max_entries);
    rep.rows.push_back({"F_Q", fe, fo, relative_error(fe, fo)});
  } else {
    const CorrelatedConfig c{{cfg.lambda, cfg.m, cfg.chi}, cfg.mu, cfg.psi, cfg.phi, cfg.eta};
    const auto quantum = states::spatsv(c.input, policy);
    const auto stats = fock::oracle_interferometer(
        fock::OracleCorrelatedScene{quantum, alpha, cfg.phi, cfg.phi, cfg.eta}, cfg.max_entries);
    add_moments(rep, readout_moments(c), stats, "N5", "N7");
  }
  return rep;
}

void write_report(const OracleReport& report, std::ostream& out) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %24s %24s %12s\n", "quantity", "engine", "oracle", "rel_error");
  out << buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%-16s %24.17g %24.17g %12.3e\n", r.quantity.c_str(), r.engine, r.oracle,
                  r.relative_error);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "worst relative error %.3e (tolerance %.1e): %s\n", report.worst(),
                report.tolerance, report.passed() ? "PASS" : "FAIL");
  out << buf;
}

}  // namespace psqm::experiments

#include <cmath>
#include <cstdio>
#include <ostream>

#include "psqm/experiments.hpp"

namespace psqm::experiments {

std::string_view to_string(Flag f) {
  switch (f) {
    case Flag::Ok: return "ok";
    case Flag::Singular: return "singular";
    case Flag::OutOfRange: return "out_of_range";
    case Flag::Precision: return "precision";
  }
  return "ok";
}

// Round-trip representation; identical doubles give identical text.
std::string format_value(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  for (const auto& [key, value] : result.metadata) out << "# " << key << ": " << value << '\n';
  out << "swept_param,m,metric,value,flag\n";
  for (const Row& r : result.rows) {
    out << format_value(r.swept_value) << ',' << r.m << ',' << r.metric << ',';
    // flagged rows leave the value empty: NaN is never written
    if (r.flag == Flag::Ok && std::isfinite(r.value)) out << format_value(r.value);
    out << ',' << to_string(r.flag) << '\n';
  }
}

}  // namespace psqm::experiments

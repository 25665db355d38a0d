#include "psqm/opalg.hpp"

#include <limits>
#include <sstream>

namespace psqm::opalg {

std::string to_string(const Monomial& m) {
  std::ostringstream os;
  bool any = false;
  for (int j = 0; j < kMaxModes; ++j) {
    if (m.creation(j) == 0) continue;
    os << (any ? " " : "") << "a" << j << "^dag";
    if (m.creation(j) > 1) os << "^" << m.creation(j);
    any = true;
  }
  for (int j = 0; j < kMaxModes; ++j) {
    if (m.annihilation(j) == 0) continue;
    os << (any ? " " : "") << "a" << j;
    if (m.annihilation(j) > 1) os << "^" << m.annihilation(j);
    any = true;
  }
  return any ? os.str() : "1";
}

namespace detail {

long long factorial(int n) {
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

long long contraction_weight(int n, int m, int k) {
  auto binom = [](int a, int b) {
    long long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  return binom(n, k) * binom(m, k) * factorial(k);
}

ModeLayout layout(const std::vector<Subsystem>& subs) {
  ModeLayout lay;
  lay.owner.fill(-1);
  lay.digits = working_digits();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto& s = subs[i];
    for (int k = 0; k < s.arity(); ++k) {
      const int j = s.modes[static_cast<std::size_t>(k)];
      Monomial::check_mode(j);
      if (lay.owner[static_cast<std::size_t>(j)] >= 0) {
        raise(ErrorKind::ModeMismatch, "mode " + std::to_string(j) + " assigned to two subsystems");
      }
      lay.owner[static_cast<std::size_t>(j)] = static_cast<int>(i);
    }
    if (s.kind == SubsystemKind::Table) lay.digits = std::min(lay.digits, s.table->digits());
  }
  return lay;
}

void require_covered(const ModeLayout& lay, const Monomial& m) {
  for (int j = 0; j < kMaxModes; ++j) {
    if (m.touches(j) && lay.owner[static_cast<std::size_t>(j)] < 0) {
      raise(ErrorKind::ModeMismatch, "mode " + std::to_string(j) + " has no input subsystem");
    }
  }
}

}  // namespace detail

}  // namespace psqm::opalg

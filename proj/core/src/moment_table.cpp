#include "psqm/moment_table.hpp"

#include <string>

#include "psqm/errors.hpp"

namespace psqm {

MomentTable::MomentTable(int arity, int max_order, unsigned digits)
    : arity_(arity), max_order_(max_order), digits_(digits) {
  if (arity != 1 && arity != 2) raise(ErrorKind::ModeMismatch, "moment tables cover one or two modes");
  if (max_order < 0) raise(ErrorKind::OutOfRange, "moment order must be non-negative");
  std::size_t n = 1;
  for (int k = 0; k < 2 * arity; ++k) n *= static_cast<std::size_t>(max_order + 1);
  values_.assign(n, HpComplex{});
  values_[0] = HpComplex(Real(1));
}

bool MomentTable::covers(int p, int q, int r, int s) const {
  if (p < 0 || q < 0 || r < 0 || s < 0) return false;
  if (arity_ == 1 && (r != 0 || s != 0)) return false;
  return p + q + r + s <= max_order_;
}

std::size_t MomentTable::index(int p, int q, int r, int s) const {
  const auto d = static_cast<std::size_t>(max_order_ + 1);
  std::size_t i = static_cast<std::size_t>(p) * d + static_cast<std::size_t>(q);
  if (arity_ == 2) i = (i * d + static_cast<std::size_t>(r)) * d + static_cast<std::size_t>(s);
  return i;
}

void MomentTable::require(int p, int q, int r, int s) const {
  if (!covers(p, q, r, s)) {
    raise(ErrorKind::MomentOrderMissing, "moment (" + std::to_string(p) + "," + std::to_string(q) + "," +
                                             std::to_string(r) + "," + std::to_string(s) +
                                             ") exceeds table order " + std::to_string(max_order_));
  }
}

const HpComplex& MomentTable::at(int p, int q) const { return at(p, q, 0, 0); }

const HpComplex& MomentTable::at(int p, int q, int r, int s) const {
  require(p, q, r, s);
  return values_[index(p, q, r, s)];
}

std::complex<double> MomentTable::value(int p, int q, int r, int s) const { return to_std(at(p, q, r, s)); }

void MomentTable::set(int p, int q, const HpComplex& v) { set(p, q, 0, 0, v); }

void MomentTable::set(int p, int q, int r, int s, const HpComplex& v) {
  require(p, q, r, s);
  values_[index(p, q, r, s)] = v;
}

}  // namespace psqm

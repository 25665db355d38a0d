#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "psqm/numeric.hpp"

namespace psqm {

// Normally ordered moments of one input subsystem.
//   arity 1:  <a^dag^p a^q>
//   arity 2:  <a1^dag^p a1^q a2^dag^r a2^s>
// Every entry with total degree p+q(+r+s) <= max_order is stored.
class MomentTable {
 public:
  MomentTable(int arity, int max_order, unsigned digits);

  int arity() const { return arity_; }
  int max_order() const { return max_order_; }
  // Decimal digits the entries are trusted to.
  unsigned digits() const { return digits_; }

  bool covers(int p, int q, int r = 0, int s = 0) const;
  // Throws MomentOrderMissing outside the stored range.
  const HpComplex& at(int p, int q) const;
  const HpComplex& at(int p, int q, int r, int s) const;
  std::complex<double> value(int p, int q, int r = 0, int s = 0) const;

  void set(int p, int q, const HpComplex& v);
  void set(int p, int q, int r, int s, const HpComplex& v);

 private:
  std::size_t index(int p, int q, int r, int s) const;
  void require(int p, int q, int r, int s) const;

  int arity_;
  int max_order_;
  unsigned digits_;
  std::vector<HpComplex> values_;
};

}  // namespace psqm

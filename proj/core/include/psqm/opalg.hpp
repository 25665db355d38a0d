#pragma once

// Normally ordered polynomials in bosonic ladder operators over up to
// kMaxModes modes, with coefficients from any Coefficient ring (exact
// rationals, extended-precision floats, or jets carrying derivatives).

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "psqm/errors.hpp"
#include "psqm/moment_table.hpp"
#include "psqm/numeric.hpp"

namespace psqm::opalg {

inline constexpr int kMaxModes = 8;
inline constexpr int kDefaultDegreeCap = 16;

// a_0^dag^{p_0} ... a_7^dag^{p_7} a_0^{q_0} ... a_7^{q_7}
class Monomial {
 public:
  Monomial() = default;
  static Monomial ladder(int mode, int p, int q) {
    Monomial m;
    m.set(mode, p, q);
    return m;
  }

  int creation(int mode) const { return e_[static_cast<std::size_t>(2 * mode)]; }
  int annihilation(int mode) const { return e_[static_cast<std::size_t>(2 * mode + 1)]; }
  void set(int mode, int p, int q) {
    check_mode(mode);
    if (p < 0 || q < 0 || p > 255 || q > 255) raise(ErrorKind::OutOfRange, "ladder exponent out of range");
    e_[static_cast<std::size_t>(2 * mode)] = static_cast<std::uint8_t>(p);
    e_[static_cast<std::size_t>(2 * mode + 1)] = static_cast<std::uint8_t>(q);
  }
  bool touches(int mode) const { return creation(mode) != 0 || annihilation(mode) != 0; }
  int degree() const {
    int d = 0;
    for (auto x : e_) d += x;
    return d;
  }
  bool is_identity() const { return degree() == 0; }

  static void check_mode(int mode) {
    if (mode < 0 || mode >= kMaxModes) raise(ErrorKind::ModeMismatch, "mode index " + std::to_string(mode));
  }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  std::array<std::uint8_t, 2 * kMaxModes> e_{};
};

std::string to_string(const Monomial& m);

namespace detail {
// C(n,k) * C(m,k) * k!, the Wick contraction count.
long long contraction_weight(int n, int m, int k);
long long factorial(int n);
}  // namespace detail

template <Coefficient C>
class OperatorPolynomial {
 public:
  using Terms = std::map<Monomial, C>;

  OperatorPolynomial() = default;

  static OperatorPolynomial constant(const C& c) { return term(Monomial{}, c); }
  static OperatorPolynomial identity() { return constant(C::from_int(1)); }
  static OperatorPolynomial term(const Monomial& m, const C& c) {
    OperatorPolynomial p;
    p.add_term(m, c);
    return p;
  }
  static OperatorPolynomial ladder(int mode, int p, int q) { return term(Monomial::ladder(mode, p, q), C::from_int(1)); }
  static OperatorPolynomial creation(int mode) { return ladder(mode, 1, 0); }
  static OperatorPolynomial annihilation(int mode) { return ladder(mode, 0, 1); }
  static OperatorPolynomial number(int mode) { return ladder(mode, 1, 1); }

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }
  C coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C{} : it->second;
  }

  void add_term(const Monomial& m, const C& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  OperatorPolynomial& operator+=(const OperatorPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  OperatorPolynomial& operator-=(const OperatorPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) { return a += b; }
  friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) { return a -= b; }
  OperatorPolynomial operator-() const {
    OperatorPolynomial r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  OperatorPolynomial scaled(const C& s) const {
    OperatorPolynomial r;
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return r;
  }

  friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

// ---- multiplication --------------------------------------------------------

template <Coefficient C>
OperatorPolynomial<C> multiply(const OperatorPolynomial<C>& a, const OperatorPolynomial<C>& b,
                               int degree_cap = kDefaultDegreeCap) {
  if (a.empty() || b.empty()) return {};
  if (a.degree() + b.degree() > degree_cap) {
    raise(ErrorKind::DegreeBoundExceeded, "product degree " + std::to_string(a.degree() + b.degree()) +
                                              " exceeds cap " + std::to_string(degree_cap));
  }
  OperatorPolynomial<C> out;
  std::vector<std::pair<Monomial, long long>> partial;
  std::vector<std::pair<Monomial, long long>> next;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      partial.assign(1, {Monomial{}, 1});
      for (int mode = 0; mode < kMaxModes; ++mode) {
        const int p1 = ma.creation(mode), q1 = ma.annihilation(mode);
        const int p2 = mb.creation(mode), q2 = mb.annihilation(mode);
        if (p1 + q1 + p2 + q2 == 0) continue;
        const int kmax = std::min(q1, p2);
        next.clear();
        for (const auto& [mono, w] : partial) {
          for (int k = 0; k <= kmax; ++k) {
            Monomial m2 = mono;
            m2.set(mode, p1 + p2 - k, q1 + q2 - k);
            next.emplace_back(m2, w * detail::contraction_weight(q1, p2, k));
          }
        }
        partial.swap(next);
      }
      const C c = ca * cb;
      for (const auto& [mono, w] : partial) out.add_term(mono, c.scaled(w));
    }
  }
  return out;
}

// ---- linear substitution ---------------------------------------------------

template <Coefficient C>
struct ModeImage {
  std::vector<std::pair<int, C>> terms;  // sum_k u_k a_k
  C shift{};                             // + beta
};

// a_j -> sum_k u_jk a_k + beta_j (and a_j^dag -> the adjoint). Modes
// without an image are left unchanged.
template <Coefficient C>
class LinearModeMap {
 public:
  LinearModeMap& map(int mode, std::vector<std::pair<int, C>> terms, C shift = C{}) {
    Monomial::check_mode(mode);
    for (const auto& t : terms) Monomial::check_mode(t.first);
    images_[static_cast<std::size_t>(mode)] = ModeImage<C>{std::move(terms), std::move(shift)};
    return *this;
  }
  const std::optional<ModeImage<C>>& image(int mode) const { return images_[static_cast<std::size_t>(mode)]; }

  // When set, substitute() first checks that the rows of u are orthonormal.
  bool unitary = false;

 private:
  std::array<std::optional<ModeImage<C>>, kMaxModes> images_{};
};

namespace detail {

template <class S>
std::complex<double> approx(const Cx<S>& c) {
  return {to_double(c.re), to_double(c.im)};
}
template <class S>
std::complex<double> approx(const Jet2<S>& c) {
  return approx(c.v);
}

using Exponents = std::array<std::uint8_t, kMaxModes>;

template <Coefficient C>
using CommutativePoly = std::map<Exponents, C>;

template <Coefficient C>
CommutativePoly<C> commutative_product(const CommutativePoly<C>& a, const CommutativePoly<C>& b) {
  CommutativePoly<C> out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponents e{};
      for (int k = 0; k < kMaxModes; ++k) {
        e[static_cast<std::size_t>(k)] =
            static_cast<std::uint8_t>(ea[static_cast<std::size_t>(k)] + eb[static_cast<std::size_t>(k)]);
      }
      C c = ca * cb;
      if (c.is_zero()) continue;
      auto [it, inserted] = out.try_emplace(e, c);
      if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

template <Coefficient C>
void check_unitary(const LinearModeMap<C>& map, double tol) {
  for (int i = 0; i < kMaxModes; ++i) {
    const auto& ri = map.image(i);
    if (!ri) continue;
    for (int j = i; j < kMaxModes; ++j) {
      const auto& rj = map.image(j);
      if (!rj) continue;
      std::complex<double> dot{0.0, 0.0};
      for (const auto& [ki, ui] : ri->terms) {
        for (const auto& [kj, uj] : rj->terms) {
          if (ki == kj) dot += approx(ui) * std::conj(approx(uj));
        }
      }
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(dot - expected) > tol) {
        raise(ErrorKind::OutOfRange, "mode map flagged unitary has non-orthonormal rows " + std::to_string(i) + "," +
                                         std::to_string(j));
      }
    }
  }
}

}  // namespace detail

template <Coefficient C>
OperatorPolynomial<C> substitute(const OperatorPolynomial<C>& poly, const LinearModeMap<C>& map,
                                 int degree_cap = kDefaultDegreeCap) {
  using detail::CommutativePoly;
  using detail::Exponents;
  if (poly.degree() > degree_cap) raise(ErrorKind::DegreeBoundExceeded, "polynomial degree exceeds cap");
  if (map.unitary) detail::check_unitary(map, 1e-12);

  // Linear forms for L_j (annihilation side) and L_j^dag (creation side).
  std::array<CommutativePoly<C>, kMaxModes> lin_ann;
  std::array<CommutativePoly<C>, kMaxModes> lin_cre;
  for (int j = 0; j < kMaxModes; ++j) {
    auto& ann = lin_ann[static_cast<std::size_t>(j)];
    auto& cre = lin_cre[static_cast<std::size_t>(j)];
    const auto& img = map.image(j);
    if (!img) {
      Exponents e{};
      e[static_cast<std::size_t>(j)] = 1;
      ann.emplace(e, C::from_int(1));
      cre.emplace(e, C::from_int(1));
      continue;
    }
    for (const auto& [k, u] : img->terms) {
      Exponents e{};
      e[static_cast<std::size_t>(k)] = 1;
      if (!u.is_zero()) {
        ann[e] += u;
        cre[e] += u.conj();
      }
    }
    if (!img->shift.is_zero()) {
      ann[Exponents{}] += img->shift;
      cre[Exponents{}] += img->shift.conj();
    }
  }

  const CommutativePoly<C> unit{{Exponents{}, C::from_int(1)}};
  std::map<std::pair<int, int>, CommutativePoly<C>> ann_pow;
  std::map<std::pair<int, int>, CommutativePoly<C>> cre_pow;
  auto power = [&](std::map<std::pair<int, int>, CommutativePoly<C>>& cache,
                   const std::array<CommutativePoly<C>, kMaxModes>& base, int mode,
                   int n) -> const CommutativePoly<C>& {
    auto key = std::make_pair(mode, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    CommutativePoly<C> r = unit;
    for (int i = 0; i < n; ++i) r = detail::commutative_product(r, base[static_cast<std::size_t>(mode)]);
    return cache.emplace(key, std::move(r)).first->second;
  };

  OperatorPolynomial<C> out;
  for (const auto& [mono, coeff] : poly.terms()) {
    CommutativePoly<C> cre = unit;
    CommutativePoly<C> ann = unit;
    for (int j = 0; j < kMaxModes; ++j) {
      if (int p = mono.creation(j); p > 0) cre = detail::commutative_product(cre, power(cre_pow, lin_cre, j, p));
      if (int q = mono.annihilation(j); q > 0) ann = detail::commutative_product(ann, power(ann_pow, lin_ann, j, q));
    }
    for (const auto& [ec, cc] : cre) {
      const C lead = coeff * cc;
      for (const auto& [ea, ca] : ann) {
        Monomial m;
        for (int k = 0; k < kMaxModes; ++k) {
          m.set(k, ec[static_cast<std::size_t>(k)], ea[static_cast<std::size_t>(k)]);
        }
        out.add_term(m, lead * ca);
      }
    }
  }
  return out;
}

// poly - mean * identity
template <Coefficient C>
OperatorPolynomial<C> center(const OperatorPolynomial<C>& poly, const C& mean) {
  OperatorPolynomial<C> r = poly;
  r.add_term(Monomial{}, -mean);
  return r;
}

// ---- expectation values ----------------------------------------------------

enum class SubsystemKind { Vacuum, Coherent, Table };

// One independent factor of the input state.
struct Subsystem {
  SubsystemKind kind = SubsystemKind::Vacuum;
  std::array<int, 2> modes{-1, -1};
  HpComplex alpha{};
  std::shared_ptr<const MomentTable> table;

  static Subsystem vacuum(int mode) { return {SubsystemKind::Vacuum, {mode, -1}, {}, nullptr}; }
  static Subsystem coherent(int mode, HpComplex alpha) {
    return {SubsystemKind::Coherent, {mode, -1}, std::move(alpha), nullptr};
  }
  static Subsystem single_mode(int mode, std::shared_ptr<const MomentTable> t) {
    if (!t || t->arity() != 1) raise(ErrorKind::ModeMismatch, "single-mode subsystem needs an arity-1 table");
    return {SubsystemKind::Table, {mode, -1}, {}, std::move(t)};
  }
  static Subsystem two_mode(int mode1, int mode2, std::shared_ptr<const MomentTable> t) {
    if (!t || t->arity() != 2) raise(ErrorKind::ModeMismatch, "two-mode subsystem needs an arity-2 table");
    return {SubsystemKind::Table, {mode1, mode2}, {}, std::move(t)};
  }
  int arity() const { return modes[1] < 0 ? 1 : 2; }
};

template <class C>
struct Expectation {
  C value;
  // Sum of |individual contributions|: value/magnitude measures cancellation.
  double magnitude = 0.0;
  // Decimal digits carried by the inputs (working precision, table digits).
  unsigned digits = 0;

  // Estimated decimal digits that survive the cancellation.
  double significant_digits() const;
  // Absolute error bound of the value part.
  double error_bound() const;
};

namespace detail {

template <class C>
struct ScalarOf {
  using type = C;
};
template <class S>
struct ScalarOf<Jet2<S>> {
  using type = S;
};

template <class S>
S from_hp(const HpComplex& z) {
  if constexpr (std::is_same_v<S, HpComplex>) {
    return z;
  } else if constexpr (std::is_same_v<S, ExactComplex>) {
    return ExactComplex(Rational(to_double(z.re)), Rational(to_double(z.im)));
  } else {
    using R = decltype(S{}.re);
    return S(static_cast<R>(to_double(z.re)), static_cast<R>(to_double(z.im)));
  }
}

template <class C>
double value_magnitude(const C& c) {
  if constexpr (requires { c.v; }) {
    return std::max({l1_magnitude(c.v), l1_magnitude(c.d1), l1_magnitude(c.d2), l1_magnitude(c.d12)});
  } else {
    return l1_magnitude(c);
  }
}

template <class S>
S power(const S& x, int n) {
  S r = S::from_int(1);
  for (int i = 0; i < n; ++i) r = r * x;
  return r;
}

struct ModeLayout {
  std::array<int, kMaxModes> owner{};  // subsystem index per mode, -1 if none
  unsigned digits = 0;
};

ModeLayout layout(const std::vector<Subsystem>& subs);

// <subsystem part of a single normally ordered monomial>
template <class S>
S single_moment(const Subsystem& s, const Monomial& m) {
  const int j = s.modes[0];
  switch (s.kind) {
    case SubsystemKind::Vacuum:
      return m.touches(j) ? S{} : S::from_int(1);
    case SubsystemKind::Coherent: {
      const S a = from_hp<S>(s.alpha);
      return power(a.conj(), m.creation(j)) * power(a, m.annihilation(j));
    }
    case SubsystemKind::Table:
      if (s.arity() == 1) return from_hp<S>(s.table->at(m.creation(j), m.annihilation(j)));
      return from_hp<S>(s.table->at(m.creation(j), m.annihilation(j), m.creation(s.modes[1]),
                                     m.annihilation(s.modes[1])));
  }
  return S{};
}

// <subsystem part of (monomial a)(monomial b)>, both normally ordered.
template <class S>
S pair_moment(const Subsystem& s, const Monomial& a, const Monomial& b) {
  const int j = s.modes[0];
  const int pa = a.creation(j), qa = a.annihilation(j), pb = b.creation(j), qb = b.annihilation(j);
  switch (s.kind) {
    case SubsystemKind::Vacuum:
      if (pa != 0 || qb != 0 || qa != pb) return S{};
      return S::from_int(factorial(qa));
    case SubsystemKind::Coherent: {
      const S al = from_hp<S>(s.alpha);
      const S ac = al.conj();
      S sum{};
      for (int k = 0; k <= std::min(qa, pb); ++k) {
        sum += (power(ac, pa + pb - k) * power(al, qa + qb - k)).scaled(contraction_weight(qa, pb, k));
      }
      return sum;
    }
    case SubsystemKind::Table: {
      const MomentTable& t = *s.table;
      if (s.arity() == 1) {
        S sum{};
        for (int k = 0; k <= std::min(qa, pb); ++k) {
          sum += from_hp<S>(t.at(pa + pb - k, qa + qb - k)).scaled(contraction_weight(qa, pb, k));
        }
        return sum;
      }
      const int i = s.modes[1];
      const int ra = a.creation(i), sa = a.annihilation(i), rb = b.creation(i), sb = b.annihilation(i);
      S sum{};
      for (int k = 0; k <= std::min(qa, pb); ++k) {
        const long long wk = contraction_weight(qa, pb, k);
        for (int l = 0; l <= std::min(sa, rb); ++l) {
          const long long w = wk * contraction_weight(sa, rb, l);
          sum += from_hp<S>(t.at(pa + pb - k, qa + qb - k, ra + rb - l, sa + sb - l)).scaled(w);
        }
      }
      return sum;
    }
  }
  return S{};
}

void require_covered(const ModeLayout& lay, const Monomial& m);

// Decimal digits a coefficient type carries.
template <class C>
unsigned coefficient_digits() {
  using S = typename ScalarOf<C>::type;
  if constexpr (std::is_same_v<S, HpComplex>) {
    return working_digits();
  } else if constexpr (std::is_same_v<S, ExactComplex>) {
    return 1000;
  } else {
    return 15;
  }
}

}  // namespace detail

template <Coefficient C>
Expectation<C> expect(const OperatorPolynomial<C>& poly, const std::vector<Subsystem>& subs) {
  using S = typename detail::ScalarOf<C>::type;
  const auto lay = detail::layout(subs);
  Expectation<C> r{C{}, 0.0, std::min(lay.digits, detail::coefficient_digits<C>())};
  for (const auto& [m, c] : poly.terms()) {
    detail::require_covered(lay, m);
    S v = S::from_int(1);
    for (const auto& s : subs) {
      v = v * detail::single_moment<S>(s, m);
      if (v.is_zero()) break;
    }
    if (v.is_zero()) continue;
    C term = c * v;
    r.magnitude += detail::value_magnitude(term);
    r.value += term;
  }
  return r;
}

// <a b> without forming the product polynomial. Vacuum subsystems are
// contracted by signature matching, which prunes most term pairs.
template <Coefficient C>
Expectation<C> expect_product(const OperatorPolynomial<C>& a, const OperatorPolynomial<C>& b,
                              const std::vector<Subsystem>& subs) {
  using S = typename detail::ScalarOf<C>::type;
  const auto lay = detail::layout(subs);
  std::vector<int> vac;
  std::vector<const Subsystem*> others;
  for (const auto& s : subs) {
    if (s.kind == SubsystemKind::Vacuum) {
      vac.push_back(s.modes[0]);
    } else {
      others.push_back(&s);
    }
  }
  auto signature = [&](const Monomial& m, bool creation) {
    Monomial sig;
    for (int j : vac) {
      if (creation) {
        sig.set(j, m.creation(j), 0);
      } else {
        sig.set(j, 0, m.annihilation(j));
      }
    }
    return sig;
  };
  auto strip = [&](const Monomial& m) {
    Monomial r = m;
    for (int j : vac) r.set(j, 0, 0);
    return r;
  };

  // b terms grouped by their vacuum creation signature; they must not
  // annihilate any vacuum mode.
  std::map<Monomial, std::vector<std::pair<Monomial, const C*>>> groups;
  for (const auto& [m, c] : b.terms()) {
    detail::require_covered(lay, m);
    bool ok = true;
    for (int j : vac) ok = ok && m.annihilation(j) == 0;
    if (!ok) continue;
    Monomial sig;
    for (int j : vac) sig.set(j, 0, m.creation(j));
    groups[sig].emplace_back(strip(m), &c);
  }

  std::map<std::pair<Monomial, Monomial>, S> cache;
  Expectation<C> r{C{}, 0.0, std::min(lay.digits, detail::coefficient_digits<C>())};
  for (const auto& [m, c] : a.terms()) {
    detail::require_covered(lay, m);
    bool ok = true;
    for (int j : vac) ok = ok && m.creation(j) == 0;
    if (!ok) continue;
    auto it = groups.find(signature(m, false));
    if (it == groups.end()) continue;
    long long vac_factor = 1;
    for (int j : vac) vac_factor *= detail::factorial(m.annihilation(j));
    const Monomial ma = strip(m);
    const C ca = c.scaled(vac_factor);
    for (const auto& [mb, cb] : it->second) {
      auto key = std::make_pair(ma, mb);
      auto ci = cache.find(key);
      if (ci == cache.end()) {
        S v = S::from_int(1);
        for (const Subsystem* s : others) {
          v = v * detail::pair_moment<S>(*s, ma, mb);
          if (v.is_zero()) break;
        }
        ci = cache.emplace(key, std::move(v)).first;
      }
      if (ci->second.is_zero()) continue;
      C term = ca * *cb * ci->second;
      r.magnitude += detail::value_magnitude(term);
      r.value += term;
    }
  }
  return r;
}

template <class C>
double Expectation<C>::significant_digits() const {
  const double v = detail::value_magnitude(value);
  if (magnitude == 0.0) return static_cast<double>(digits);
  if (v == 0.0) return 0.0;
  return static_cast<double>(digits) - std::max(0.0, std::log10(magnitude / v));
}

template <class C>
double Expectation<C>::error_bound() const {
  return 10.0 * magnitude * std::pow(10.0, -static_cast<double>(digits));
}

}  // namespace psqm::opalg

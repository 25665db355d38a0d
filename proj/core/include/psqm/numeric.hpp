#pragma once

// Scalar types shared by every module.
//
// Real       extended precision float (MPFR, runtime-selectable digits)
// Rational   exact rational (GMP), used for exact symbolic checks
// Cx<R>      minimal complex number over any ordered field R
// Jet2<C>    truncated bivariate Taylor jet c + c1 e1 + c2 e2 + c12 e1 e2
//            with e1^2 = e2^2 = 0; carries exact first and mixed derivatives
//            through polynomial arithmetic.

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <utility>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace psqm {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using Rational = boost::multiprecision::mpq_rational;

inline constexpr unsigned kDefaultWorkingDigits = 64;
inline constexpr const char* kPrecisionEnvVar = "PSQM_PRECISION_DIGITS";

// Decimal digits used for every Real created afterwards. Process-wide: set it
// before launching worker threads, never while they run.
void set_working_digits(unsigned digits);
unsigned working_digits();
// Digits requested through PSQM_PRECISION_DIGITS, or the default.
unsigned digits_from_environment();

template <class R>
struct Cx {
  R re{0};
  R im{0};

  Cx() = default;
  Cx(R r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  static Cx from_int(long long k) { return Cx(R(k)); }

  Cx conj() const { return Cx(re, -im); }
  R norm() const { return re * re + im * im; }
  bool is_zero() const { return re == 0 && im == 0; }
  Cx scaled(long long k) const {
    const R f(k);
    return Cx(re * f, im * f);
  }

  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cx& operator*=(const Cx& o) {
    R r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Cx operator-() const { return Cx(-re, -im); }

  friend Cx operator+(Cx a, const Cx& b) { return a += b; }
  friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
  friend Cx operator*(Cx a, const Cx& b) { return a *= b; }
  friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
};

using HpComplex = Cx<Real>;
using ExactComplex = Cx<Rational>;

template <class C>
struct Jet2 {
  C v{}, d1{}, d2{}, d12{};

  Jet2() = default;
  Jet2(C value) : v(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Jet2(C value, C a, C b, C ab)
      : v(std::move(value)), d1(std::move(a)), d2(std::move(b)), d12(std::move(ab)) {}

  static Jet2 from_int(long long k) { return Jet2(C::from_int(k)); }

  Jet2 conj() const { return Jet2(v.conj(), d1.conj(), d2.conj(), d12.conj()); }
  bool is_zero() const { return v.is_zero() && d1.is_zero() && d2.is_zero() && d12.is_zero(); }
  Jet2 scaled(long long k) const { return Jet2(v.scaled(k), d1.scaled(k), d2.scaled(k), d12.scaled(k)); }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    d12 += o.d12;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    d1 -= o.d1;
    d2 -= o.d2;
    d12 -= o.d12;
    return *this;
  }
  Jet2 operator-() const { return Jet2(-v, -d1, -d2, -d12); }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    return Jet2(a.v * b.v, a.v * b.d1 + a.d1 * b.v, a.v * b.d2 + a.d2 * b.v,
                a.v * b.d12 + a.d12 * b.v + a.d1 * b.d2 + a.d2 * b.d1);
  }
  Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
  friend Jet2 operator*(const Jet2& a, const C& s) { return Jet2(a.v * s, a.d1 * s, a.d2 * s, a.d12 * s); }
  friend bool operator==(const Jet2& a, const Jet2& b) {
    return a.v == b.v && a.d1 == b.d1 && a.d2 == b.d2 && a.d12 == b.d12;
  }
};

using HpJet = Jet2<HpComplex>;

// Ring interface required of operator-polynomial coefficients.
template <class C>
concept Coefficient = std::copyable<C> && requires(const C a, const C b, long long k) {
  { a + b } -> std::convertible_to<C>;
  { a - b } -> std::convertible_to<C>;
  { a * b } -> std::convertible_to<C>;
  { a.scaled(k) } -> std::convertible_to<C>;
  { a.conj() } -> std::convertible_to<C>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { C::from_int(k) } -> std::convertible_to<C>;
};

// ---- conversions -----------------------------------------------------------

inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline std::complex<double> to_std(const HpComplex& z) { return {to_double(z.re), to_double(z.im)}; }
inline HpComplex to_hp(std::complex<double> z) { return HpComplex(Real(z.real()), Real(z.imag())); }

inline Real hp_abs(const HpComplex& z) { return boost::multiprecision::sqrt(z.norm()); }

// |re| + |im| as a double: a cheap magnitude for cancellation bookkeeping.
template <class R>
double l1_magnitude(const Cx<R>& z) {
  return std::abs(to_double(z.re)) + std::abs(to_double(z.im));
}

Real hp_pi();

// e^{i theta}
inline HpComplex hp_polar(const Real& modulus, const Real& theta) {
  return HpComplex(modulus * boost::multiprecision::cos(theta), modulus * boost::multiprecision::sin(theta));
}

}  // namespace psqm

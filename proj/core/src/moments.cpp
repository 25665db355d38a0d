#include "psqm/moments.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "psqm/errors.hpp"

namespace psqm {

namespace {

constexpr double kAutoExtendedBudget = 4e6;
constexpr unsigned kLongDoubleDigits = 18;

using LdComplex = std::complex<long double>;

// sqrt(n!/(n-k)!) for k <= order, n < levels (zero when n < k).
template <class R>
std::vector<std::vector<R>> sqrt_falling_table(int order, int levels) {
  std::vector<std::vector<R>> g(static_cast<std::size_t>(order + 1), std::vector<R>(static_cast<std::size_t>(levels)));
  for (int k = 0; k <= order; ++k) {
    for (int n = 0; n < levels; ++n) {
      if (n < k) {
        g[k][n] = R(0);
        continue;
      }
      R f(1);
      for (int i = 0; i < k; ++i) f *= R(n - i);
      using std::sqrt;
      g[k][n] = sqrt(f);
    }
  }
  return g;
}

bool use_extended(Accumulation acc, double cost) {
  switch (acc) {
    case Accumulation::Extended:
      return true;
    case Accumulation::LongDouble:
      return false;
    case Accumulation::Auto:
      break;
  }
  return cost <= kAutoExtendedBudget;
}

HpComplex to_hp_value(const HpComplex& z) { return z; }
HpComplex to_hp_value(const LdComplex& z) { return HpComplex(Real(z.real()), Real(z.imag())); }

HpComplex conj_of(const HpComplex& z) { return z.conj(); }
LdComplex conj_of(const LdComplex& z) { return std::conj(z); }
HpComplex scale(const HpComplex& z, const Real& w) { return HpComplex(z.re * w, z.im * w); }
LdComplex scale(const LdComplex& z, long double w) { return z * w; }

// ---- single mode -----------------------------------------------------------

template <class Z, class R, class Lift>
void fill_single(MomentTable& t, std::span<const fock::Amplitude> amps, int order, Lift lift) {
  const int levels = static_cast<int>(amps.size());
  std::vector<Z> psi;
  psi.reserve(amps.size());
  for (const auto& a : amps) psi.push_back(lift(a));
  const auto g = sqrt_falling_table<R>(order, levels);
  for (int p = 0; p <= order; ++p) {
    for (int q = 0; q <= p && p + q <= order; ++q) {
      Z sum{};
      for (int j = 0; j + p < levels; ++j) {
        const Z& x = psi[static_cast<std::size_t>(j + p)];
        const Z& y = psi[static_cast<std::size_t>(j + q)];
        const R w = g[p][j + p] * g[q][j + q];
        sum += scale(conj_of(x) * y, w);
      }
      const HpComplex v = to_hp_value(sum);
      t.set(p, q, v);
      if (p != q) t.set(q, p, v.conj());
    }
  }
}

}  // namespace

MomentTable table_from_state(const fock::FockState1& state, int max_order, Accumulation acc) {
  if (max_order < 0) raise(ErrorKind::OutOfRange, "moment order must be non-negative");
  const fock::FockState1 s = state.normalized();
  const double entries = (max_order + 1.0) * (max_order + 2.0) / 2.0;
  const bool ext = use_extended(acc, entries * (s.cutoff() + 1));
  MomentTable t(1, max_order, ext ? working_digits() : kLongDoubleDigits);
  if (ext) {
    fill_single<HpComplex, Real>(t, s.amplitudes(), max_order,
                                 [](const fock::Amplitude& a) { return to_hp(a); });
  } else {
    fill_single<LdComplex, long double>(t, s.amplitudes(), max_order,
                                        [](const fock::Amplitude& a) { return LdComplex(a.real(), a.imag()); });
  }
  return t;
}

// ---- two-mode diagonal -----------------------------------------------------

namespace {

template <class Z, class R, class Lift>
void fill_diagonal(MomentTable& t, std::span<const fock::Amplitude> amps, int order, Lift lift) {
  const int levels = static_cast<int>(amps.size());
  std::vector<Z> c;
  c.reserve(amps.size());
  for (const auto& a : amps) c.push_back(lift(a));
  const auto g = sqrt_falling_table<R>(order, levels);
  for (int d = 0; d <= order / 2; ++d) {
    // w_n = conj(c_{n+d}) c_n
    std::vector<Z> w(static_cast<std::size_t>(std::max(levels - d, 0)));
    for (int n = 0; n + d < levels; ++n) w[static_cast<std::size_t>(n)] = conj_of(c[n + d]) * c[n];
    // entries with p - q = r - s = d >= 0; negative d by hermiticity
    for (int q = 0; 2 * (q + d) <= order; ++q) {
      for (int s = 0; 2 * (q + s + d) <= order; ++s) {
        const int p = q + d, r = s + d;
        Z sum{};
        for (int n = std::max(q, s); n + d < levels; ++n) {
          const R f = g[q][n] * g[s][n] * g[p][n + d] * g[r][n + d];
          sum += scale(w[static_cast<std::size_t>(n)], f);
        }
        const HpComplex v = to_hp_value(sum);
        t.set(p, q, r, s, v);
        if (d != 0) t.set(q, p, s, r, v.conj());
      }
    }
  }
}

}  // namespace

MomentTable table_from_state(const fock::TwoModeDiagonalState& state, int max_order, Accumulation acc) {
  if (max_order < 0) raise(ErrorKind::OutOfRange, "moment order must be non-negative");
  const fock::TwoModeDiagonalState s = state.normalized();
  const double entries = (max_order + 1.0) * (max_order + 1.0);
  const bool ext = use_extended(acc, entries * (s.cutoff() + 1));
  MomentTable t(2, max_order, ext ? working_digits() : kLongDoubleDigits);
  if (ext) {
    fill_diagonal<HpComplex, Real>(t, s.diag_amplitudes(), max_order,
                                   [](const fock::Amplitude& a) { return to_hp(a); });
  } else {
    fill_diagonal<LdComplex, long double>(t, s.diag_amplitudes(), max_order,
                                          [](const fock::Amplitude& a) { return LdComplex(a.real(), a.imag()); });
  }
  return t;
}

// ---- loss ------------------------------------------------------------------

MomentTable apply_loss(const MomentTable& table, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) raise(ErrorKind::OutOfRange, "efficiency must lie in [0, 1]");
  MomentTable out(table.arity(), table.max_order(), table.digits());
  const int n = table.max_order();
  std::vector<Real> pow_eta(static_cast<std::size_t>(n + 1));
  const Real root = boost::multiprecision::sqrt(Real(eta));
  pow_eta[0] = Real(1);
  for (int k = 1; k <= n; ++k) pow_eta[static_cast<std::size_t>(k)] = pow_eta[static_cast<std::size_t>(k - 1)] * root;
  const int rmax = table.arity() == 2 ? n : 0;
  for (int p = 0; p <= n; ++p) {
    for (int q = 0; p + q <= n; ++q) {
      for (int r = 0; r <= rmax && p + q + r <= n; ++r) {
        for (int s = 0; s <= rmax && p + q + r + s <= n; ++s) {
          const HpComplex& v = table.at(p, q, r, s);
          const Real& f = pow_eta[static_cast<std::size_t>(p + q + r + s)];
          out.set(p, q, r, s, HpComplex(v.re * f, v.im * f));
        }
      }
    }
  }
  return out;
}

// ---- scalar statistics -----------------------------------------------------

namespace {

HpComplex mode_moment(const MomentTable& t, int mode, int p, int q) {
  if (mode == 0) return t.arity() == 1 ? t.at(p, q) : t.at(p, q, 0, 0);
  if (mode == 1 && t.arity() == 2) return t.at(0, 0, p, q);
  raise(ErrorKind::ModeMismatch, "table has no mode " + std::to_string(mode));
}

Real real_part_rotated(const HpComplex& z, const Real& angle) {
  // Re(z e^{-i angle})
  return z.re * boost::multiprecision::cos(angle) + z.im * boost::multiprecision::sin(angle);
}

}  // namespace

double quadrature_variance(const MomentTable& table, double theta, int mode) {
  const Real th(theta);
  const Real a2 = real_part_rotated(mode_moment(table, mode, 0, 2), 2 * th);
  const Real n = mode_moment(table, mode, 1, 1).re;
  const Real a1 = real_part_rotated(mode_moment(table, mode, 0, 1), th);
  const Real second = (2 * a2 + 2 * n + 1) / 2;
  return to_double(second - 2 * a1 * a1);
}

double quadrature_difference_variance(const MomentTable& table, double theta) {
  if (table.arity() != 2) raise(ErrorKind::ModeMismatch, "quadrature difference needs a two-mode table");
  const Real th(theta);
  const Real x1sq = (2 * real_part_rotated(table.at(0, 2, 0, 0), 2 * th) + 2 * table.at(1, 1, 0, 0).re + 1) / 2;
  const Real x2sq = (2 * real_part_rotated(table.at(0, 0, 0, 2), 2 * th) + 2 * table.at(0, 0, 1, 1).re + 1) / 2;
  const Real x1x2 = real_part_rotated(table.at(0, 1, 0, 1), 2 * th) + table.at(1, 0, 0, 1).re;
  const Real mean = boost::multiprecision::sqrt(Real(2)) *
                    (real_part_rotated(table.at(0, 1, 0, 0), th) - real_part_rotated(table.at(0, 0, 0, 1), th));
  const Real var = x1sq + x2sq - 2 * x1x2 - mean * mean;
  return to_double(var / 2);
}

double mean_photons(const MomentTable& table, int mode) { return to_double(mode_moment(table, mode, 1, 1).re); }

double mandel_q(const MomentTable& table, int mode) {
  const Real n = mode_moment(table, mode, 1, 1).re;
  if (!(n > 1e-300)) raise(ErrorKind::ZeroMeanPhoton, "Mandel Q undefined for zero mean photon number");
  const Real f2 = mode_moment(table, mode, 2, 2).re;
  return to_double((f2 - n * n) / n);
}

JointDistribution joint_photon_distribution(const fock::TwoModeDiagonalState& state) {
  const auto s = state.normalized();
  JointDistribution j;
  j.dim = s.cutoff() + 1;
  j.p.assign(static_cast<std::size_t>(j.dim) * static_cast<std::size_t>(j.dim), 0.0);
  for (int n = 0; n < j.dim; ++n) j.p[static_cast<std::size_t>(n * j.dim + n)] = std::norm(s[n]);
  return j;
}

std::vector<double> marginal_distribution(const JointDistribution& joint) {
  std::vector<double> m(static_cast<std::size_t>(joint.dim), 0.0);
  for (int a = 0; a < joint.dim; ++a) {
    for (int b = 0; b < joint.dim; ++b) m[static_cast<std::size_t>(a)] += joint.at(a, b);
  }
  return m;
}

}  // namespace psqm

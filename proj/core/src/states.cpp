#include "psqm/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "psqm/errors.hpp"

namespace psqm::states {

using fock::Amplitude;
using fock::CutoffPolicy;
using fock::LevelTerm;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMeanTail = 1e-16;

void check_spec(double lambda, int m) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) raise(ErrorKind::OutOfRange, "lambda must be finite and >= 0");
  if (m < 0) raise(ErrorKind::OutOfRange, "number of subtracted photons must be >= 0");
}

template <class T>
T legendre_recurrence(int m, const T& x) {
  if (m < 0) raise(ErrorKind::OutOfRange, "Legendre order must be >= 0");
  T p0(1);
  if (m == 0) return p0;
  T p1 = x;
  for (int n = 1; n < m; ++n) {
    T p2 = (T(2 * n + 1) * x * p1 - T(n) * p0) / T(n + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Normalizes a list of (log weight, phase) coefficients into amplitudes.
std::vector<Amplitude> normalize_log(const std::vector<LevelTerm>& terms) {
  double peak = kNegInf;
  for (const auto& t : terms) peak = std::max(peak, t.log_weight);
  std::vector<Amplitude> out(terms.size());
  double total = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!std::isfinite(terms[i].log_weight)) continue;
    const double w = std::exp(terms[i].log_weight - peak);
    out[i] = std::polar(std::sqrt(w), terms[i].phase);
    total += w;
  }
  for (auto& a : out) a /= std::sqrt(total);
  return out;
}

}  // namespace

std::complex<double> legendre_p(int m, std::complex<double> x) { return legendre_recurrence(m, x); }

Rational legendre_p(int m, const Rational& x) { return legendre_recurrence(m, x); }

double squeezing_parameter(double lambda) { return std::asinh(std::sqrt(lambda)); }

// ---- PASSV -----------------------------------------------------------------

fock::FockState1 passv(const PassvSpec& spec, const CutoffPolicy& policy) {
  check_spec(spec.lambda, spec.m);
  if (spec.lambda == 0.0 && spec.m > 0) raise(ErrorKind::NullState, "photon subtraction from the vacuum");
  const double r = squeezing_parameter(spec.lambda);
  const int m = spec.m;
  const double chi = spec.chi;
  return fock::FockState1(fock::build_adaptive(
      [r, m, chi](int n) {
        LevelTerm t = fock::squeezed_vacuum_term(r, chi, n + m);
        if (std::isfinite(t.log_weight)) t.log_weight += fock::log_falling_ratio(n, m);
        return t;
      },
      policy, "passv"));
}

fock::FockState1 passv_seed(const PassvSpec& spec) {
  check_spec(spec.lambda, spec.m);
  const int m = spec.m;
  std::vector<LevelTerm> terms(static_cast<std::size_t>(m + 1), LevelTerm{kNegInf, 0.0});
  if (spec.lambda == 0.0) {
    terms[static_cast<std::size_t>(m % 2)] = {0.0, 0.0};
  } else {
    const double log_k = std::log(0.5 * std::sqrt((1.0 + spec.lambda) / spec.lambda));
    for (int l = 0; 2 * l <= m; ++l) {
      const int n = m - 2 * l;
      terms[static_cast<std::size_t>(n)] = {
          2.0 * (l * log_k - std::lgamma(l + 1.0) - 0.5 * std::lgamma(n + 1.0)),
          spec.chi * (m - l),
      };
    }
  }
  return fock::FockState1(normalize_log(terms));
}

namespace {

fock::FockState1 squeeze_once(const fock::FockState1& seed, double lambda, double chi, const CutoffPolicy& policy) {
  const double r = squeezing_parameter(lambda);
  const fock::FockState1 vac = fock::squeezed_vacuum(r, chi, policy);
  const int k_max = seed.cutoff();
  const int dim = vac.cutoff() + k_max + 1;
  const Amplitude c(std::cosh(r), 0.0);
  const Amplitude se = std::polar(std::sinh(r), -chi);  // e^{-i chi} sinh r

  std::vector<Amplitude> cur(static_cast<std::size_t>(dim));
  std::copy(vac.amplitudes().begin(), vac.amplitudes().end(), cur.begin());
  std::vector<Amplitude> out(static_cast<std::size_t>(dim));
  std::vector<Amplitude> next(static_cast<std::size_t>(dim));
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      // (c a^dag - e^{-i chi} s a) / sqrt(k)
      for (int n = 0; n < dim; ++n) {
        Amplitude v{};
        if (n > 0) v += c * std::sqrt(static_cast<double>(n)) * cur[n - 1];
        if (n + 1 < dim) v -= se * std::sqrt(static_cast<double>(n + 1)) * cur[n + 1];
        next[n] = v / std::sqrt(static_cast<double>(k));
      }
      cur.swap(next);
    }
    const Amplitude w = seed[k];
    if (w == Amplitude{}) continue;
    for (int n = 0; n < dim; ++n) out[n] += w * cur[n];
  }
  return fock::FockState1(std::move(out)).normalized();
}

// levels above (vacuum cutoff - seed degree) feel the vacuum truncation
template <class State, class Once>
State squeeze_to_tail(const State& seed, const CutoffPolicy& policy, int extra, Once once) {
  if (policy.cutoff) return once(policy);
  CutoffPolicy inner = policy;
  for (int i = 0; i < 12; ++i) {
    State s = once(inner);
    const int clean = s.cutoff() - 2 * seed.cutoff() - extra;
    if (clean >= 0 && s.tail_mass_above(clean) <= policy.tail) return s;
    if (inner.tail < 1e-280) return s;
    inner.tail *= 1e-6;
  }
  return once(inner);
}

}  // namespace

fock::FockState1 squeeze(const fock::FockState1& seed, double lambda, double chi, const CutoffPolicy& policy) {
  return squeeze_to_tail(seed, policy, 1, [&](const CutoffPolicy& p) { return squeeze_once(seed, lambda, chi, p); });
}

double passv_norm_squared(double lambda, int m) {
  check_spec(lambda, m);
  const std::complex<double> x(0.0, std::sqrt(lambda));
  std::complex<double> f = std::tgamma(m + 1.0) * legendre_p(m, x);
  for (int i = 0; i < m; ++i) f *= -x;
  return f.real();
}

double passv_mean_photons(double lambda, int m) {
  check_spec(lambda, m);
  const double l = lambda;
  switch (m) {
    case 0:
      return l;
    case 1:
      return 3.0 * l + 1.0;
    case 2:
      return 3.0 * l * (3.0 + 5.0 * l) / (1.0 + 3.0 * l);
    case 3:
      return (3.0 + 30.0 * l + 35.0 * l * l) / (3.0 + 5.0 * l);
    default:
      break;
  }
  if (lambda == 0.0) return mean_photons_infimum(StateKind::SingleMode, m);
  return passv({lambda, m, 0.0}, {std::nullopt, kMeanTail}).mean_photons();
}

// ---- SPATSV ----------------------------------------------------------------

fock::TwoModeDiagonalState spatsv(const SpatsvSpec& spec, const CutoffPolicy& policy) {
  check_spec(spec.lambda, spec.m);
  if (spec.lambda == 0.0 && spec.m > 0) raise(ErrorKind::NullState, "photon subtraction from the vacuum");
  const double lambda = spec.lambda;
  const int m = spec.m;
  const double chi = spec.chi;
  return fock::TwoModeDiagonalState(fock::build_adaptive(
      [lambda, m, chi](int n) {
        LevelTerm t = fock::two_mode_squeezed_term(lambda, chi, n + m);
        if (std::isfinite(t.log_weight)) t.log_weight += 2.0 * fock::log_falling_ratio(n, m);
        return t;
      },
      policy, "spatsv"));
}

fock::TwoModeDiagonalState spatsv_seed(const SpatsvSpec& spec) {
  check_spec(spec.lambda, spec.m);
  const int m = spec.m;
  std::vector<LevelTerm> terms(static_cast<std::size_t>(m + 1), LevelTerm{kNegInf, 0.0});
  if (spec.lambda == 0.0) {
    terms[0] = {0.0, 0.0};
  } else {
    const double log_x = std::log(spec.lambda / (1.0 + spec.lambda));
    for (int k = 0; k <= m; ++k) {
      const double log_binom = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
      terms[static_cast<std::size_t>(k)] = {2.0 * log_binom + k * log_x, spec.chi * k};
    }
  }
  return fock::TwoModeDiagonalState(normalize_log(terms));
}

namespace {

fock::TwoModeDiagonalState two_mode_squeeze_once(const fock::TwoModeDiagonalState& seed, double lambda, double chi,
                                                 const CutoffPolicy& policy) {
  const double r = squeezing_parameter(lambda);
  const fock::TwoModeDiagonalState vac = fock::two_mode_squeezed_vacuum(lambda, chi, policy);
  const int k_max = seed.cutoff();
  const int dim = vac.cutoff() + k_max + 2;
  const double c = std::cosh(r);
  const Amplitude se = std::polar(std::sinh(r), -chi);
  auto at = [dim](std::vector<Amplitude>& v, int n1, int n2) -> Amplitude& {
    return v[static_cast<std::size_t>(n1) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(n2)];
  };
  const auto size = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  std::vector<Amplitude> cur(size), tmp(size), out(size);
  for (int n = 0; n <= vac.cutoff(); ++n) at(cur, n, n) = vac[n];

  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      // B' = c a2^dag - e^{-i chi} s a1
      for (int n1 = 0; n1 < dim; ++n1) {
        for (int n2 = 0; n2 < dim; ++n2) {
          Amplitude v{};
          if (n2 > 0) v += c * std::sqrt(static_cast<double>(n2)) * at(cur, n1, n2 - 1);
          if (n1 + 1 < dim) v -= se * std::sqrt(static_cast<double>(n1 + 1)) * at(cur, n1 + 1, n2);
          at(tmp, n1, n2) = v;
        }
      }
      // A' = c a1^dag - e^{-i chi} s a2, then 1/k
      for (int n1 = 0; n1 < dim; ++n1) {
        for (int n2 = 0; n2 < dim; ++n2) {
          Amplitude v{};
          if (n1 > 0) v += c * std::sqrt(static_cast<double>(n1)) * at(tmp, n1 - 1, n2);
          if (n2 + 1 < dim) v -= se * std::sqrt(static_cast<double>(n2 + 1)) * at(tmp, n1, n2 + 1);
          at(cur, n1, n2) = v / static_cast<double>(k);
        }
      }
    }
    const Amplitude w = seed[k];
    if (w == Amplitude{}) continue;
    for (std::size_t i = 0; i < size; ++i) out[i] += w * cur[i];
  }
  std::vector<Amplitude> diag(static_cast<std::size_t>(dim));
  double off = 0.0;
  for (int n1 = 0; n1 < dim; ++n1) {
    for (int n2 = 0; n2 < dim; ++n2) {
      if (n1 == n2) {
        diag[n1] = at(out, n1, n2);
      } else {
        off += std::norm(at(out, n1, n2));
      }
    }
  }
  double on = 0.0;
  for (const auto& a : diag) on += std::norm(a);
  if (off > 1e-20 * on) raise(ErrorKind::ModeMismatch, "two-mode squeezing left the |n,n> subspace");
  return fock::TwoModeDiagonalState(std::move(diag)).normalized();
}

}  // namespace

fock::TwoModeDiagonalState two_mode_squeeze(const fock::TwoModeDiagonalState& seed, double lambda, double chi,
                                            const CutoffPolicy& policy) {
  return squeeze_to_tail(seed, policy, 2,
                         [&](const CutoffPolicy& p) { return two_mode_squeeze_once(seed, lambda, chi, p); });
}

double spatsv_norm_squared(double lambda, int m) {
  check_spec(lambda, m);
  const double f = std::tgamma(m + 1.0);
  return f * f * std::pow(lambda, m) * legendre_p(m, std::complex<double>(2.0 * lambda + 1.0, 0.0)).real();
}

double spatsv_mean_photons(double lambda, int m) {
  check_spec(lambda, m);
  if (m == 0) return lambda;
  if (lambda == 0.0) return mean_photons_infimum(StateKind::TwoMode, m);
  return spatsv({lambda, m, 0.0}, {std::nullopt, kMeanTail}).mean_photons_per_mode();
}

// ---- energy balancing ------------------------------------------------------

double mean_photons(StateKind kind, double lambda, int m) {
  return kind == StateKind::SingleMode ? passv_mean_photons(lambda, m) : spatsv_mean_photons(lambda, m);
}

double mean_photons_infimum(StateKind kind, int m) {
  if (m < 0) raise(ErrorKind::OutOfRange, "number of subtracted photons must be >= 0");
  if (kind == StateKind::SingleMode) return m % 2 == 1 ? 1.0 : 0.0;
  return 0.0;
}

double balance_energy(double target, int m, StateKind kind) {
  if (!(target >= 0.0) || !std::isfinite(target)) raise(ErrorKind::OutOfRange, "target energy must be finite and >= 0");
  const double inf = mean_photons_infimum(kind, m);
  if (target < inf) {
    raise(ErrorKind::OutOfRange, "target energy " + std::to_string(target) + " below the attainable minimum " +
                                     std::to_string(inf) + " for m=" + std::to_string(m));
  }
  if (m == 0) return target;
  if (target == inf) return 0.0;

  double lo = 0.0;
  double hi = std::max(target, 1e-6);
  while (mean_photons(kind, hi, m) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) raise(ErrorKind::OutOfRange, "energy balancing failed to bracket the target");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_photons(kind, mid, m) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace psqm::states

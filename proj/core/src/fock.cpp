#include "psqm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "psqm/errors.hpp"

namespace psqm::fock {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Generation stops once weights fall e^-96 (~1e-42) below the peak.
constexpr double kDecayLog = 96.0;
constexpr int kMaxLevels = 50'000'000;

template <class Vec>
double sum_norm(const Vec& v) {
  long double s = 0.0L;
  for (const auto& a : v) s += std::norm(a);
  return static_cast<double>(s);
}

template <class Vec>
double tail_above(const Vec& v, int n) {
  long double s = 0.0L;
  for (std::size_t k = static_cast<std::size_t>(std::max(n + 1, 0)); k < v.size(); ++k) s += std::norm(v[k]);
  return static_cast<double>(s);
}

template <class Vec>
Vec scaled_copy(const Vec& v, double factor) {
  Vec out(v);
  for (auto& a : out) a *= factor;
  return out;
}

// sqrt((n+m)!/n!)
double sqrt_falling_ratio(int n, int m) {
  if (m <= 16) {
    double f = 1.0;
    for (int k = 1; k <= m; ++k) f *= static_cast<double>(n + k);
    return std::sqrt(f);
  }
  return std::exp(0.5 * log_falling_ratio(n, m));
}

double falling_ratio(int n, int m) {
  if (m <= 16) {
    double f = 1.0;
    for (int k = 1; k <= m; ++k) f *= static_cast<double>(n + k);
    return f;
  }
  return std::exp(log_falling_ratio(n, m));
}

}  // namespace

// ---- FockState1 ------------------------------------------------------------

FockState1::FockState1() : amps_{Amplitude{1.0, 0.0}} {}

FockState1::FockState1(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) raise(ErrorKind::CutoffTooSmall, "a Fock state needs at least one level");
}

double FockState1::norm_squared() const { return sum_norm(amps_); }

FockState1 FockState1::normalized() const {
  const double n2 = norm_squared();
  if (std::sqrt(n2) < kNullThreshold) raise(ErrorKind::NullState, "cannot normalize a null state");
  return FockState1(scaled_copy(amps_, 1.0 / std::sqrt(n2)));
}

double FockState1::mean_photons() const {
  long double s = 0.0L;
  for (std::size_t n = 0; n < amps_.size(); ++n) s += static_cast<long double>(n) * std::norm(amps_[n]);
  return static_cast<double>(s / norm_squared());
}

double FockState1::tail_mass_above(int n) const { return tail_above(amps_, n) / norm_squared(); }

// ---- TwoModeDiagonalState --------------------------------------------------

TwoModeDiagonalState::TwoModeDiagonalState() : diag_{Amplitude{1.0, 0.0}} {}

TwoModeDiagonalState::TwoModeDiagonalState(std::vector<Amplitude> diag_amplitudes)
    : diag_(std::move(diag_amplitudes)) {
  if (diag_.empty()) raise(ErrorKind::CutoffTooSmall, "a two-mode state needs at least one level");
}

double TwoModeDiagonalState::norm_squared() const { return sum_norm(diag_); }

TwoModeDiagonalState TwoModeDiagonalState::normalized() const {
  const double n2 = norm_squared();
  if (std::sqrt(n2) < kNullThreshold) raise(ErrorKind::NullState, "cannot normalize a null state");
  return TwoModeDiagonalState(scaled_copy(diag_, 1.0 / std::sqrt(n2)));
}

double TwoModeDiagonalState::mean_photons_per_mode() const {
  long double s = 0.0L;
  for (std::size_t n = 0; n < diag_.size(); ++n) s += static_cast<long double>(n) * std::norm(diag_[n]);
  return static_cast<double>(s / norm_squared());
}

double TwoModeDiagonalState::tail_mass_above(int n) const { return tail_above(diag_, n) / norm_squared(); }

// ---- level terms -----------------------------------------------------------

double log_falling_ratio(int n, int m) {
  return std::lgamma(static_cast<double>(n + m) + 1.0) - std::lgamma(static_cast<double>(n) + 1.0);
}

LevelTerm squeezed_vacuum_term(double r, double chi, int n) {
  if (n % 2 != 0) return {kNegInf, 0.0};
  const int k = n / 2;
  const double base = -std::log(std::cosh(r));
  if (k == 0) return {base, 0.0};
  const double t = std::tanh(r);
  if (t == 0.0) return {kNegInf, 0.0};
  const double lw = base + 2.0 * (k * std::log(t / 2.0) + 0.5 * std::lgamma(2.0 * k + 1.0) - std::lgamma(k + 1.0));
  return {lw, chi * k};
}

LevelTerm coherent_term(Amplitude alpha, int n) {
  const double mu = std::norm(alpha);
  if (n == 0) return {-mu, 0.0};
  if (mu == 0.0) return {kNegInf, 0.0};
  return {-mu + n * std::log(mu) - std::lgamma(n + 1.0), n * std::arg(alpha)};
}

LevelTerm two_mode_squeezed_term(double lambda, double chi, int n) {
  const double base = -std::log1p(lambda);
  if (n == 0) return {base, 0.0};
  if (lambda == 0.0) return {kNegInf, 0.0};
  return {base + n * std::log(lambda / (1.0 + lambda)), chi * n};
}

// ---- adaptive builder ------------------------------------------------------

std::vector<Amplitude> build_adaptive(const LevelGenerator& level, const CutoffPolicy& policy,
                                      std::string_view what) {
  if (policy.cutoff && *policy.cutoff < 0) {
    raise(ErrorKind::CutoffTooSmall, std::string(what) + ": cutoff must be non-negative");
  }
  const int min_levels = policy.cutoff ? *policy.cutoff + 1 : 1;

  std::vector<double> log_w;
  std::vector<double> phase;
  double peak = kNegInf;
  int peak_at = -1;
  double last_finite = kNegInf;
  int last_finite_at = -1;
  bool decaying = false;

  for (int n = 0;; ++n) {
    if (n >= kMaxLevels) {
      raise(ErrorKind::MemoryBoundExceeded, std::string(what) + ": distribution does not decay within level bound");
    }
    const LevelTerm t = level(n);
    log_w.push_back(t.log_weight);
    phase.push_back(t.phase);
    if (std::isfinite(t.log_weight)) {
      if (t.log_weight > peak) {
        peak = t.log_weight;
        peak_at = n;
      }
      decaying = t.log_weight < last_finite;
      last_finite = t.log_weight;
      last_finite_at = n;
    }
    if (n + 1 < min_levels) continue;
    if (peak_at < 0) {
      if (n > 1024) raise(ErrorKind::NullState, std::string(what) + ": every level vanishes");
      continue;
    }
    if (n > peak_at + 8) {
      const bool negligible = last_finite < peak - kDecayLog && decaying;
      const bool exhausted = last_finite_at < n - 64;
      if (negligible || exhausted) break;
    }
  }

  std::vector<double> prob(log_w.size(), 0.0);
  for (std::size_t n = 0; n < log_w.size(); ++n) {
    if (std::isfinite(log_w[n])) prob[n] = std::exp(log_w[n] - peak);
  }
  // Suffix sums: tail[n] = mass strictly above n.
  std::vector<long double> tail(prob.size(), 0.0L);
  long double acc = 0.0L;
  for (std::size_t n = prob.size(); n-- > 0;) {
    tail[n] = acc;
    acc += prob[n];
  }
  const long double total = acc;

  int cutoff = 0;
  if (policy.cutoff) {
    cutoff = *policy.cutoff;
    const double t = static_cast<double>(tail[static_cast<std::size_t>(cutoff)] / total);
    if (!(t < policy.tail)) {
      raise(ErrorKind::CutoffTooSmall, std::string(what) + ": tail mass " + std::to_string(t) + " beyond cutoff " +
                                           std::to_string(cutoff) + " exceeds tolerance");
    }
  } else {
    int n0 = 0;
    while (static_cast<std::size_t>(n0) + 1 < tail.size() &&
           !(static_cast<double>(tail[static_cast<std::size_t>(n0)] / total) < policy.tail)) {
      ++n0;
    }
    cutoff = std::min(n0 + kTailGuard, static_cast<int>(prob.size()) - 1);
  }

  std::vector<Amplitude> amps(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= cutoff; ++n) {
    const auto i = static_cast<std::size_t>(n);
    amps[i] = std::polar(std::sqrt(static_cast<double>(prob[i] / total)), phase[i]);
  }
  const double kept = sum_norm(amps);
  for (auto& a : amps) a /= std::sqrt(kept);
  return amps;
}

// ---- constructors ----------------------------------------------------------

FockState1 coherent_state(Amplitude alpha, const CutoffPolicy& policy) {
  return FockState1(build_adaptive([alpha](int n) { return coherent_term(alpha, n); }, policy, "coherent_state"));
}

FockState1 squeezed_vacuum(double r, double chi, const CutoffPolicy& policy) {
  if (!(r >= 0.0)) raise(ErrorKind::OutOfRange, "squeezing parameter must be non-negative");
  return FockState1(
      build_adaptive([r, chi](int n) { return squeezed_vacuum_term(r, chi, n); }, policy, "squeezed_vacuum"));
}

TwoModeDiagonalState two_mode_squeezed_vacuum(double lambda, double chi, const CutoffPolicy& policy) {
  if (!(lambda >= 0.0)) raise(ErrorKind::OutOfRange, "mean photon number must be non-negative");
  return TwoModeDiagonalState(build_adaptive([lambda, chi](int n) { return two_mode_squeezed_term(lambda, chi, n); },
                                             policy, "two_mode_squeezed_vacuum"));
}

// ---- subtraction -----------------------------------------------------------

Subtracted<FockState1> subtract_photons(const FockState1& state, int m) {
  if (m < 0) raise(ErrorKind::OutOfRange, "number of subtracted photons must be non-negative");
  if (state.cutoff() < m) raise(ErrorKind::NullState, "no support above the subtracted photon number");
  std::vector<Amplitude> out(static_cast<std::size_t>(state.cutoff() - m) + 1);
  for (int n = 0; n + m <= state.cutoff(); ++n) {
    out[static_cast<std::size_t>(n)] = state[n + m] * sqrt_falling_ratio(n, m);
  }
  const double norm = std::sqrt(sum_norm(out));
  if (!(norm >= kNullThreshold)) raise(ErrorKind::NullState, "photon subtraction annihilated the state");
  return {FockState1(scaled_copy(out, 1.0 / norm)), norm};
}

Subtracted<TwoModeDiagonalState> subtract_photons(const TwoModeDiagonalState& state, int m) {
  if (m < 0) raise(ErrorKind::OutOfRange, "number of subtracted photons must be non-negative");
  if (state.cutoff() < m) raise(ErrorKind::NullState, "no support above the subtracted photon number");
  std::vector<Amplitude> out(static_cast<std::size_t>(state.cutoff() - m) + 1);
  for (int n = 0; n + m <= state.cutoff(); ++n) {
    out[static_cast<std::size_t>(n)] = state[n + m] * falling_ratio(n, m);
  }
  const double norm = std::sqrt(sum_norm(out));
  if (!(norm >= kNullThreshold)) raise(ErrorKind::NullState, "photon subtraction annihilated the state");
  return {TwoModeDiagonalState(scaled_copy(out, 1.0 / norm)), norm};
}

// ---- overlaps --------------------------------------------------------------

namespace {
template <class Span>
Amplitude inner(Span a, Span b) {
  const std::size_t n = std::min(a.size(), b.size());
  Amplitude s{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) s += std::conj(a[k]) * b[k];
  return s;
}
}  // namespace

Amplitude overlap(const FockState1& a, const FockState1& b) { return inner(a.amplitudes(), b.amplitudes()); }

Amplitude overlap(const TwoModeDiagonalState& a, const TwoModeDiagonalState& b) {
  return inner(a.diag_amplitudes(), b.diag_amplitudes());
}

}  // namespace psqm::fock

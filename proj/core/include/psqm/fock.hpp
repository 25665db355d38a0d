#pragma once

// Truncated Fock-space states.
//
// Constructors pick their own cutoff unless one is supplied: the smallest n0
// whose normalized tail mass beyond n0 is below CutoffPolicy::tail, plus a
// guard band of kTailGuard levels. A supplied cutoff is accepted only if the
// tail beyond it is below the same tolerance.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace psqm::fock {

using Amplitude = std::complex<double>;

inline constexpr double kTailTolerance = 1e-12;
inline constexpr int kTailGuard = 5;
inline constexpr double kNullThreshold = 1e-300;

struct CutoffPolicy {
  std::optional<int> cutoff;
  double tail = kTailTolerance;
};

class FockState1 {
 public:
  FockState1();  // vacuum
  explicit FockState1(std::vector<Amplitude> amplitudes);

  int cutoff() const { return static_cast<int>(amps_.size()) - 1; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  const Amplitude& operator[](int n) const { return amps_[static_cast<std::size_t>(n)]; }

  double norm_squared() const;
  FockState1 normalized() const;
  double mean_photons() const;
  // Probability mass strictly above level n.
  double tail_mass_above(int n) const;

 private:
  std::vector<Amplitude> amps_;
};

// Two-mode state supported on |n,n>.
class TwoModeDiagonalState {
 public:
  TwoModeDiagonalState();  // |0,0>
  explicit TwoModeDiagonalState(std::vector<Amplitude> diag_amplitudes);

  int cutoff() const { return static_cast<int>(diag_.size()) - 1; }
  std::span<const Amplitude> diag_amplitudes() const { return diag_; }
  const Amplitude& operator[](int n) const { return diag_[static_cast<std::size_t>(n)]; }

  double norm_squared() const;
  TwoModeDiagonalState normalized() const;
  // Mean photon number of either mode.
  double mean_photons_per_mode() const;
  double tail_mass_above(int n) const;

 private:
  std::vector<Amplitude> diag_;
};

template <class State>
struct Subtracted {
  State state;
  // Norm of the unnormalized result of the annihilation operators.
  double success_norm;
};

FockState1 coherent_state(Amplitude alpha, const CutoffPolicy& policy = {});

// Squeezed vacuum with <N> = sinh^2 r. At chi = 0 the squeezed quadrature is
// Y = (a - a^dag)/(i sqrt 2), i.e. <a^2> = +sinh r cosh r.
FockState1 squeezed_vacuum(double r, double chi, const CutoffPolicy& policy = {});

// Two-mode squeezed vacuum with lambda mean photons per mode;
// amplitude of |n,n> is (e^{i chi} tanh r)^n / cosh r.
TwoModeDiagonalState two_mode_squeezed_vacuum(double lambda, double chi, const CutoffPolicy& policy = {});

Subtracted<FockState1> subtract_photons(const FockState1& state, int m);
Subtracted<TwoModeDiagonalState> subtract_photons(const TwoModeDiagonalState& state, int m);

// <a|b>; the shorter state is zero-padded.
Amplitude overlap(const FockState1& a, const FockState1& b);
Amplitude overlap(const TwoModeDiagonalState& a, const TwoModeDiagonalState& b);

template <class State>
double fidelity(const State& a, const State& b) {
  return std::norm(overlap(a, b));
}

// ---- adaptive construction -------------------------------------------------

// log|a_n|^2 (unnormalized, -inf for an exactly vanishing level) and arg a_n.
struct LevelTerm {
  double log_weight;
  double phase;
};
using LevelGenerator = std::function<LevelTerm(int n)>;

// Generates levels until the weights have decayed far below the tail
// tolerance, then truncates per the cutoff contract and normalizes.
std::vector<Amplitude> build_adaptive(const LevelGenerator& level, const CutoffPolicy& policy,
                                      std::string_view what);

// Closed-form level terms shared with the `states` module.
LevelTerm squeezed_vacuum_term(double r, double chi, int n);
LevelTerm coherent_term(Amplitude alpha, int n);
LevelTerm two_mode_squeezed_term(double lambda, double chi, int n);

// log((n+m)!/n!)
double log_falling_ratio(int n, int m);

}  // namespace psqm::fock

#pragma once

// Brute-force Fock-space oracle: dense multimode tensors evolved through
// beamsplitters and phase shifts by exact Fock-block matrix elements. Loss is
// an ancilla beamsplitter whose output is summed incoherently over ancilla
// occupations. Used only to validate the moment engine at small scale.

#include <array>
#include <cstddef>
#include <vector>

#include "psqm/fock.hpp"

namespace psqm::fock {

inline constexpr std::size_t kDefaultOracleEntries = std::size_t{1} << 24;

// 2x2 mode transformation in the Heisenberg form a_out = T a_in.
using Matrix2 = std::array<std::array<Amplitude, 2>, 2>;

class MultiModeState {
 public:
  explicit MultiModeState(std::vector<int> dims, std::size_t max_entries = kDefaultOracleEntries);

  static MultiModeState from(const FockState1& s, std::size_t max_entries = kDefaultOracleEntries);
  static MultiModeState from(const TwoModeDiagonalState& s, std::size_t max_entries = kDefaultOracleEntries);

  // Modes of `a` followed by modes of `b`.
  static MultiModeState tensor(const MultiModeState& a, const MultiModeState& b);

  int modes() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return amps_.size(); }
  std::size_t max_entries() const { return max_entries_; }

  Amplitude at(const std::vector<int>& index) const;
  Amplitude& at(const std::vector<int>& index);

  double norm_squared() const;
  double mean_photons(int mode) const;

  // Output dimension of both modes is one more than the largest occupied
  // total photon number of the pair, so no amplitude is truncated.
  MultiModeState apply_beamsplitter(int i, int j, const Matrix2& t) const;
  // |n> -> e^{i theta n} on one mode.
  MultiModeState apply_phase(int mode, double theta) const;

  // Unnormalized conditional state of the remaining modes given that `mode`
  // holds n photons.
  MultiModeState project(int mode, int n) const;

  // P(n_i, n_j) with every other mode traced out; row-major in n_i.
  std::vector<double> marginal(int i, int j) const;

 private:
  std::size_t offset(const std::vector<int>& index) const;
  void check_mode(int mode) const;

  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::vector<Amplitude> amps_;
  std::size_t max_entries_;
};

// <k, N-k| U |n0, N-n0> for N = 0..max_total, indexed [N][k][n0].
std::vector<std::vector<std::vector<Amplitude>>> beamsplitter_blocks(const Matrix2& t, int max_total);

// Photon-number distribution at two detectors.
struct ReadoutStatistics {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<double> p;  // row-major P(n_a, n_b)

  double at(int a, int b) const { return p[static_cast<std::size_t>(a) * static_cast<std::size_t>(dim_b) + b]; }
  double total() const;
  // <N_a^p N_b^q>
  double moment(int pa, int pb) const;
};

// Detection efficiency eta on both detectors: each detector is preceded by a
// beamsplitter to a vacuum ancilla that is then traced out.
ReadoutStatistics apply_detector_loss(const ReadoutStatistics& s, double eta);

// Single Mach-Zehnder: 50:50 beamsplitter, phases +-phi/2 on the arms,
// 50:50 beamsplitter. Inputs: quantum mode and coherent mode; read-out
// ports (c, d) = (output 0, output 1).
struct OracleSingleScene {
  FockState1 quantum;
  Amplitude alpha;
  double phi = 0.0;
  double eta = 1.0;
};

// Two such interferometers: quantum modes on ports 1, 2, coherent states on
// ports 3, 4; read-out ports 5 (first interferometer) and 7 (second).
struct OracleCorrelatedScene {
  TwoModeDiagonalState quantum;
  Amplitude alpha;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double eta = 1.0;
};

ReadoutStatistics oracle_interferometer(const OracleSingleScene& scene,
                                        std::size_t max_entries = kDefaultOracleEntries);
ReadoutStatistics oracle_interferometer(const OracleCorrelatedScene& scene,
                                        std::size_t max_entries = kDefaultOracleEntries);

// 4 Var(n_3) for a_3 = (a_1 + a_2)/sqrt 2 on |quantum> (x) |alpha>.
double oracle_qfi(const FockState1& quantum, Amplitude alpha, std::size_t max_entries = kDefaultOracleEntries);

}  // namespace psqm::fock

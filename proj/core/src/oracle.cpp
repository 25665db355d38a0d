#include "psqm/oracle.hpp"

#include <cmath>
#include <string>

#include "psqm/errors.hpp"

namespace psqm::fock {

namespace {

constexpr double kOracleTail = 1e-16;

std::size_t checked_product(const std::vector<int>& dims, std::size_t max_entries) {
  std::size_t n = 1;
  for (int d : dims) {
    if (d <= 0) raise(ErrorKind::OutOfRange, "mode dimension must be positive");
    if (n > max_entries / static_cast<std::size_t>(d)) {
      raise(ErrorKind::MemoryBoundExceeded, "oracle tensor exceeds " + std::to_string(max_entries) + " entries");
    }
    n *= static_cast<std::size_t>(d);
  }
  if (n > max_entries) {
    raise(ErrorKind::MemoryBoundExceeded, "oracle tensor exceeds " + std::to_string(max_entries) + " entries");
  }
  return n;
}

Matrix2 hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return {{{Amplitude(h), Amplitude(h)}, {Amplitude(h), Amplitude(-h)}}};
}

// 50:50, phases +phi/2 and -phi/2 on the arms, 50:50.
MultiModeState mach_zehnder(const MultiModeState& s, int i, int j, double phi) {
  return s.apply_beamsplitter(i, j, hadamard())
      .apply_phase(i, phi / 2.0)
      .apply_phase(j, -phi / 2.0)
      .apply_beamsplitter(i, j, hadamard());
}

ReadoutStatistics statistics(const MultiModeState& s, int i, int j) {
  ReadoutStatistics r;
  r.dim_a = s.dims()[static_cast<std::size_t>(i)];
  r.dim_b = s.dims()[static_cast<std::size_t>(j)];
  r.p = s.marginal(i, j);
  return r;
}

}  // namespace

// ---- MultiModeState --------------------------------------------------------

MultiModeState::MultiModeState(std::vector<int> dims, std::size_t max_entries)
    : dims_(std::move(dims)), max_entries_(max_entries) {
  const std::size_t n = checked_product(dims_, max_entries_);
  strides_.assign(dims_.size(), 1);
  for (int k = static_cast<int>(dims_.size()) - 2; k >= 0; --k) {
    strides_[static_cast<std::size_t>(k)] =
        strides_[static_cast<std::size_t>(k + 1)] * static_cast<std::size_t>(dims_[static_cast<std::size_t>(k + 1)]);
  }
  amps_.assign(n, Amplitude{});
}

MultiModeState MultiModeState::from(const FockState1& s, std::size_t max_entries) {
  MultiModeState m({s.cutoff() + 1}, max_entries);
  for (int n = 0; n <= s.cutoff(); ++n) m.amps_[static_cast<std::size_t>(n)] = s[n];
  return m;
}

MultiModeState MultiModeState::from(const TwoModeDiagonalState& s, std::size_t max_entries) {
  MultiModeState m({s.cutoff() + 1, s.cutoff() + 1}, max_entries);
  for (int n = 0; n <= s.cutoff(); ++n) m.at({n, n}) = s[n];
  return m;
}

MultiModeState MultiModeState::tensor(const MultiModeState& a, const MultiModeState& b) {
  std::vector<int> dims = a.dims_;
  dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
  MultiModeState m(std::move(dims), std::max(a.max_entries_, b.max_entries_));
  for (std::size_t x = 0; x < a.amps_.size(); ++x) {
    if (a.amps_[x] == Amplitude{}) continue;
    for (std::size_t y = 0; y < b.amps_.size(); ++y) m.amps_[x * b.amps_.size() + y] = a.amps_[x] * b.amps_[y];
  }
  return m;
}

void MultiModeState::check_mode(int mode) const {
  if (mode < 0 || mode >= modes()) raise(ErrorKind::ModeMismatch, "oracle has no mode " + std::to_string(mode));
}

std::size_t MultiModeState::offset(const std::vector<int>& index) const {
  if (index.size() != dims_.size()) raise(ErrorKind::ModeMismatch, "index rank differs from mode count");
  std::size_t off = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= dims_[k]) raise(ErrorKind::OutOfRange, "Fock index beyond cutoff");
    off += static_cast<std::size_t>(index[k]) * strides_[k];
  }
  return off;
}

Amplitude MultiModeState::at(const std::vector<int>& index) const { return amps_[offset(index)]; }
Amplitude& MultiModeState::at(const std::vector<int>& index) { return amps_[offset(index)]; }

double MultiModeState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

double MultiModeState::mean_photons(int mode) const {
  check_mode(mode);
  const auto st = strides_[static_cast<std::size_t>(mode)];
  const auto d = static_cast<std::size_t>(dims_[static_cast<std::size_t>(mode)]);
  double s = 0.0;
  for (std::size_t x = 0; x < amps_.size(); ++x) s += static_cast<double>((x / st) % d) * std::norm(amps_[x]);
  return s;
}

MultiModeState MultiModeState::apply_beamsplitter(int i, int j, const Matrix2& t) const {
  check_mode(i);
  check_mode(j);
  if (i == j) raise(ErrorKind::ModeMismatch, "beamsplitter needs two distinct modes");
  const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
  const std::size_t si = strides_[ui], sj = strides_[uj];
  const auto di = static_cast<std::size_t>(dims_[ui]), dj = static_cast<std::size_t>(dims_[uj]);

  int nmax = 0;
  for (std::size_t x = 0; x < amps_.size(); ++x) {
    if (amps_[x] == Amplitude{}) continue;
    nmax = std::max(nmax, static_cast<int>((x / si) % di + (x / sj) % dj));
  }
  std::vector<int> nd = dims_;
  nd[ui] = nd[uj] = nmax + 1;
  MultiModeState out(nd, max_entries_);
  const std::size_t ti = out.strides_[ui], tj = out.strides_[uj];
  const auto blocks = beamsplitter_blocks(t, nmax);

  for (std::size_t x = 0; x < amps_.size(); ++x) {
    if ((x / si) % di != 0 || (x / sj) % dj != 0) continue;
    std::size_t base = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (k == ui || k == uj) continue;
      base += ((x / strides_[k]) % static_cast<std::size_t>(dims_[k])) * out.strides_[k];
    }
    for (int n = 0; n <= nmax; ++n) {
      const auto& block = blocks[static_cast<std::size_t>(n)];
      const int lo = std::max(0, n - static_cast<int>(dj) + 1);
      const int hi = std::min(n, static_cast<int>(di) - 1);
      for (int n0 = lo; n0 <= hi; ++n0) {
        const Amplitude in = amps_[x + static_cast<std::size_t>(n0) * si + static_cast<std::size_t>(n - n0) * sj];
        if (in == Amplitude{}) continue;
        for (int k = 0; k <= n; ++k) {
          out.amps_[base + static_cast<std::size_t>(k) * ti + static_cast<std::size_t>(n - k) * tj] +=
              block[static_cast<std::size_t>(k)][static_cast<std::size_t>(n0)] * in;
        }
      }
    }
  }
  return out;
}

MultiModeState MultiModeState::apply_phase(int mode, double theta) const {
  check_mode(mode);
  MultiModeState out = *this;
  const auto st = strides_[static_cast<std::size_t>(mode)];
  const auto d = static_cast<std::size_t>(dims_[static_cast<std::size_t>(mode)]);
  std::vector<Amplitude> ph(d);
  for (std::size_t n = 0; n < d; ++n) ph[n] = std::polar(1.0, theta * static_cast<double>(n));
  for (std::size_t x = 0; x < out.amps_.size(); ++x) out.amps_[x] *= ph[(x / st) % d];
  return out;
}

MultiModeState MultiModeState::project(int mode, int n) const {
  check_mode(mode);
  const auto um = static_cast<std::size_t>(mode);
  if (n < 0 || n >= dims_[um]) raise(ErrorKind::OutOfRange, "Fock index beyond cutoff");
  std::vector<int> nd = dims_;
  nd.erase(nd.begin() + mode);
  if (nd.empty()) raise(ErrorKind::ModeMismatch, "cannot project out the only mode");
  MultiModeState out(nd, max_entries_);
  const std::size_t st = strides_[um];
  const auto d = static_cast<std::size_t>(dims_[um]);
  // row-major order survives removing one index
  std::size_t y = 0;
  for (std::size_t x = 0; x < amps_.size(); ++x) {
    if ((x / st) % d != static_cast<std::size_t>(n)) continue;
    out.amps_[y++] = amps_[x];
  }
  return out;
}

std::vector<double> MultiModeState::marginal(int i, int j) const {
  check_mode(i);
  check_mode(j);
  const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
  const auto di = static_cast<std::size_t>(dims_[ui]), dj = static_cast<std::size_t>(dims_[uj]);
  std::vector<double> p(di * dj, 0.0);
  for (std::size_t x = 0; x < amps_.size(); ++x) {
    p[((x / strides_[ui]) % di) * dj + (x / strides_[uj]) % dj] += std::norm(amps_[x]);
  }
  return p;
}

// ---- beamsplitter matrix elements ------------------------------------------

std::vector<std::vector<std::vector<Amplitude>>> beamsplitter_blocks(const Matrix2& t, int max_total) {
  std::vector<std::vector<std::vector<Amplitude>>> m(static_cast<std::size_t>(max_total + 1));
  m[0] = {{Amplitude(1.0)}};
  for (int n = 1; n <= max_total; ++n) {
    const auto& prev = m[static_cast<std::size_t>(n - 1)];
    auto& cur = m[static_cast<std::size_t>(n)];
    cur.assign(static_cast<std::size_t>(n + 1), std::vector<Amplitude>(static_cast<std::size_t>(n + 1)));
    auto p = [&](int k, int n0) -> Amplitude {
      if (k < 0 || k > n - 1) return {};
      return prev[static_cast<std::size_t>(k)][static_cast<std::size_t>(n0)];
    };
    for (int n0 = 0; n0 <= n; ++n0) {
      // |n0, n-n0> = a_0^dag |n0-1, n-n0> / sqrt(n0), or a_1^dag |0, n-1> / sqrt(n)
      const int src = n0 > 0 ? n0 - 1 : 0;
      const Amplitude u0 = n0 > 0 ? t[0][0] : t[0][1];
      const Amplitude u1 = n0 > 0 ? t[1][0] : t[1][1];
      const double norm = std::sqrt(static_cast<double>(n0 > 0 ? n0 : n));
      for (int k = 0; k <= n; ++k) {
        const Amplitude v = u0 * std::sqrt(static_cast<double>(k)) * p(k - 1, src) +
                            u1 * std::sqrt(static_cast<double>(n - k)) * p(k, src);
        cur[static_cast<std::size_t>(k)][static_cast<std::size_t>(n0)] = v / norm;
      }
    }
  }
  return m;
}

// ---- read-out --------------------------------------------------------------

double ReadoutStatistics::total() const {
  double s = 0.0;
  for (double x : p) s += x;
  return s;
}

double ReadoutStatistics::moment(int pa, int pb) const {
  double s = 0.0;
  for (int a = 0; a < dim_a; ++a) {
    const double fa = std::pow(static_cast<double>(a), pa);
    for (int b = 0; b < dim_b; ++b) s += fa * std::pow(static_cast<double>(b), pb) * at(a, b);
  }
  return s;
}

ReadoutStatistics apply_detector_loss(const ReadoutStatistics& s, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) raise(ErrorKind::OutOfRange, "efficiency must lie in [0, 1]");
  const double re = std::sqrt(eta), rl = std::sqrt(1.0 - eta);
  const Matrix2 t{{{Amplitude(re), Amplitude(rl)}, {Amplitude(-rl), Amplitude(re)}}};
  const int nmax = std::max(s.dim_a, s.dim_b) - 1;
  const auto blocks = beamsplitter_blocks(t, nmax);
  // keep[n][k]: n photons enter, k reach the detector, n-k go to the ancilla
  auto keep = [&](int n, int k) {
    return std::norm(blocks[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)][static_cast<std::size_t>(n)]);
  };
  ReadoutStatistics r{s.dim_a, s.dim_b, std::vector<double>(s.p.size(), 0.0)};
  std::vector<double> tmp(s.p.size(), 0.0);
  for (int a = 0; a < s.dim_a; ++a) {
    for (int b = 0; b < s.dim_b; ++b) {
      const double v = s.at(a, b);
      if (v == 0.0) continue;
      for (int k = 0; k <= a; ++k) tmp[static_cast<std::size_t>(k * s.dim_b + b)] += keep(a, k) * v;
    }
  }
  for (int a = 0; a < s.dim_a; ++a) {
    for (int b = 0; b < s.dim_b; ++b) {
      const double v = tmp[static_cast<std::size_t>(a * s.dim_b + b)];
      if (v == 0.0) continue;
      for (int k = 0; k <= b; ++k) r.p[static_cast<std::size_t>(a * s.dim_b + k)] += keep(b, k) * v;
    }
  }
  return r;
}

// ---- scenes ----------------------------------------------------------------

ReadoutStatistics oracle_interferometer(const OracleSingleScene& scene, std::size_t max_entries) {
  const FockState1 coh = coherent_state(scene.alpha, {std::nullopt, kOracleTail});
  MultiModeState s = MultiModeState::tensor(MultiModeState::from(scene.quantum.normalized(), max_entries),
                                            MultiModeState::from(coh, max_entries));
  s = mach_zehnder(s, 0, 1, scene.phi);
  return apply_detector_loss(statistics(s, 0, 1), scene.eta);
}

ReadoutStatistics oracle_interferometer(const OracleCorrelatedScene& scene, std::size_t max_entries) {
  const FockState1 coh = coherent_state(scene.alpha, {std::nullopt, kOracleTail});
  const MultiModeState c = MultiModeState::from(coh, max_entries);
  MultiModeState s = MultiModeState::tensor(
      MultiModeState::tensor(MultiModeState::from(scene.quantum.normalized(), max_entries), c), c);
  // modes: ports 1, 2, 3, 4
  s = mach_zehnder(s, 0, 2, scene.phi1);
  // port 6 is never read: sum the second interferometer over its outcomes
  ReadoutStatistics total;
  for (int k = 0; k < s.dims()[2]; ++k) {
    MultiModeState branch = s.project(2, k);  // ports 5, 2, 4
    if (branch.norm_squared() == 0.0) continue;
    branch = mach_zehnder(branch, 1, 2, scene.phi2);
    const ReadoutStatistics part = statistics(branch, 0, 1);
    if (total.p.empty()) {
      total = part;
      continue;
    }
    if (part.dim_a != total.dim_a || part.dim_b != total.dim_b) {
      ReadoutStatistics grown{std::max(part.dim_a, total.dim_a), std::max(part.dim_b, total.dim_b), {}};
      grown.p.assign(static_cast<std::size_t>(grown.dim_a) * static_cast<std::size_t>(grown.dim_b), 0.0);
      for (const ReadoutStatistics* src : std::array<const ReadoutStatistics*, 2>{&total, &part}) {
        for (int a = 0; a < src->dim_a; ++a) {
          for (int b = 0; b < src->dim_b; ++b) {
            grown.p[static_cast<std::size_t>(a * grown.dim_b + b)] += src->at(a, b);
          }
        }
      }
      total = std::move(grown);
      continue;
    }
    for (std::size_t x = 0; x < total.p.size(); ++x) total.p[x] += part.p[x];
  }
  return apply_detector_loss(total, scene.eta);
}

double oracle_qfi(const FockState1& quantum, Amplitude alpha, std::size_t max_entries) {
  const FockState1 coh = coherent_state(alpha, {std::nullopt, kOracleTail});
  MultiModeState s = MultiModeState::tensor(MultiModeState::from(quantum.normalized(), max_entries),
                                            MultiModeState::from(coh, max_entries));
  s = s.apply_beamsplitter(0, 1, hadamard());
  const auto p = s.marginal(0, 1);
  const int d0 = s.dims()[0], d1 = s.dims()[1];
  double m1 = 0.0, m2 = 0.0;
  for (int a = 0; a < d0; ++a) {
    double pa = 0.0;
    for (int b = 0; b < d1; ++b) pa += p[static_cast<std::size_t>(a * d1 + b)];
    m1 += a * pa;
    m2 += static_cast<double>(a) * a * pa;
  }
  return 4.0 * (m2 - m1 * m1);
}

}  // namespace psqm::fock

// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.
// Usage: psqm_acceptance [--criterion N]...

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "psqm/errors.hpp"
#include "psqm/experiments.hpp"
#include "psqm/fock.hpp"
#include "psqm/metrology.hpp"
#include "psqm/moments.hpp"
#include "psqm/oracle.hpp"
#include "psqm/states.hpp"

using namespace psqm;

namespace {

constexpr double kHalfPi = 1.5707963267948966;

struct Outcome {
  bool pass = true;
  std::string summary;
};

void note(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void note(const char* fmt, ...) {
  std::printf("    ");
  va_list ap;
  va_start(ap, fmt);
  std::vprintf(fmt, ap);
  va_end(ap);
  std::printf("\n");
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Truncated-Fock reference: subtraction applied to the squeezed vacuum
// amplitudes, independent of the closed forms and the seed construction.
fock::FockState1 direct_passv(double lambda, int m) {
  const auto sv = fock::squeezed_vacuum(states::squeezing_parameter(lambda), 0.0, {std::nullopt, 1e-28});
  return fock::subtract_photons(sv, m).state;
}

fock::TwoModeDiagonalState direct_spatsv(double lambda, int m) {
  return fock::subtract_photons(fock::two_mode_squeezed_vacuum(lambda, 0.0, {std::nullopt, 1e-28}), m).state;
}

// 1 ---------------------------------------------------------------------------
Outcome mean_photon_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    int m;
    double lambda, expected;
  };
  double worst = 0.0;
  for (const Case c : {Case{1, 2.0, 7.0}, Case{2, 1.0, 6.0}, Case{3, 1.0, 8.5}}) {
    const double closed = states::passv_mean_photons(c.lambda, c.m);
    const double fockv = direct_passv(c.lambda, c.m).mean_photons();
    const double e1 = std::abs(closed / c.expected - 1.0);
    const double e2 = std::abs(fockv / c.expected - 1.0);
    note("N_%d(%g): closed form %.15g, truncated Fock %.15g, expected %g (rel err %.2e, %.2e)", c.m, c.lambda, closed,
         fockv, c.expected, e1, e2);
    worst = std::max({worst, e1, e2});
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 1.0, fmt("worst relative error %.2e (<= 1e-10), runtime %.3f s (< 1 s)", worst, t)};
}

// 2 ---------------------------------------------------------------------------
Outcome representation_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double lambda : {0.1, 1.0, 5.0}) {
    for (int m = 0; m <= 4; ++m) {
      const auto seeded = states::squeeze(states::passv_seed({lambda, m, 0.0}), lambda, 0.0);
      worst = std::max(worst, 1.0 - fock::fidelity(direct_passv(lambda, m), seeded));
    }
    for (int m = 0; m <= 3; ++m) {
      const auto seeded = states::two_mode_squeeze(states::spatsv_seed({lambda, m, 0.0}), lambda, 0.0);
      worst = std::max(worst, 1.0 - fock::fidelity(direct_spatsv(lambda, m), seeded));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 10.0, fmt("worst infidelity %.2e (<= 1e-12), runtime %.2f s (< 10 s)", worst, t)};
}

// 3 ---------------------------------------------------------------------------
double balanced_qfi(int m, double psi) {
  const double target = 1e4 - 100.0;
  const double l0 = states::balance_energy(target, m, states::StateKind::SingleMode);
  return qfi(SingleMziConfig{{l0, m, 0.0}, 100.0, psi, kHalfPi, 1.0});
}

Outcome qfi_asymptotics() {
  const auto t0 = std::chrono::steady_clock::now();
  // coherent phase psi = pi/2; psi = 0 reported for reference
  double worst = 0.0;
  const double f0 = balanced_qfi(0, kHalfPi);
  const double g0 = balanced_qfi(0, 0.0);
  for (int m = 1; m <= 4; ++m) {
    const double ratio = balanced_qfi(m, kHalfPi) / f0;
    const double dev = std::abs(ratio * (2 * m + 1) - 1.0);
    const double ref = balanced_qfi(m, 0.0) / g0;
    note("m=%d: F_Q(m)/F_Q(0) = %.6f vs 1/(2m+1) = %.6f (deviation %.3f%%); at psi=0: %.6f (%.2f%%)", m, ratio,
         1.0 / (2 * m + 1), 100 * dev, ref, 100 * std::abs(ref * (2 * m + 1) - 1.0));
    worst = std::max(worst, dev);
  }
  const double t = seconds_since(t0);
  return {worst <= 0.02 && t < 30.0,
          fmt("N_tot=1e4, mu=100, psi=pi/2: worst deviation %.3f%% (<= 2%%), runtime %.1f s (< 30 s)", 100 * worst, t)};
}

// 4 ---------------------------------------------------------------------------
Outcome cramer_rao() {
  double worst = INFINITY;
  int points = 0;
  for (double lambda : {0.05, 0.2, 1.0, 3.0, 10.0}) {
    for (double mu : {2.5, 7.0, 30.0, 150.0, 1000.0}) {
      for (int m = 0; m <= 2; ++m) {
        const SingleMziConfig c{{lambda, m, 0.0}, mu, 0.0, kHalfPi, 1.0};
        const double p = single_phase_uncertainty(c) * std::sqrt(qfi(c));
        worst = std::min(worst, p);
        ++points;
      }
    }
  }
  return {worst >= 1.0 - 1e-9, fmt("min U*sqrt(F_Q) = %.12f over %g points (>= 1 - 1e-9)", worst, points)};
}

// 5 ---------------------------------------------------------------------------
Outcome nrf_large_lambda() {
  const double tau = 0.9, lambda = 50.0;
  const double law = 1.0 - tau + tau / (4.0 * lambda);
  double worst = 0.0;
  for (int m = 0; m <= 2; ++m) {
    const double v = nrf(CorrelatedConfig{{lambda, m, 0.0}, 1e6, kHalfPi, phi_from_tau(tau), 1.0});
    note("m=%d: NRF %.6f vs law %.6f", m, v, law);
    worst = std::max(worst, std::abs(v / law - 1.0));
  }
  return {worst <= 0.01, fmt("worst relative deviation %.3f%% (<= 1%%)", 100 * worst)};
}

// 6 ---------------------------------------------------------------------------
Outcome nrf_small_lambda() {
  const double tau = 0.9, lambda = 1e-3;
  double worst = 0.0;
  for (int m = 0; m <= 2; ++m) {
    const double v = nrf(CorrelatedConfig{{lambda, m, 0.0}, 1e6, kHalfPi, phi_from_tau(tau), 1.0});
    const double a = nrf_asymptotic(m, tau, lambda);
    note("m=%d: NRF %.6f vs closed form %.6f", m, v, a);
    worst = std::max(worst, std::abs(v - a));
  }
  return {worst <= 1e-2, fmt("worst absolute deviation %.2e (<= 1e-2)", worst)};
}

// 7 ---------------------------------------------------------------------------
// Photon-statistics reference for phi -> 0 with psi = pi/2: the quantum modes
// reach ports 5 and 7 through the detector loss, so C -> D^2 with
// D = n1' - n2' binomially thinned, while the phase signal is carried by the
// pair amplitude: d^2<C>/dphi1 dphi2 -> eta^2 mu <a1 a2>. Normalized by
// U_cl = sqrt 2/(eta mu), U -> sqrt(Var D^2)/(eta <a1 a2>).
double dark_fringe_limit(double lambda, int m, double eta) {
  const auto s = direct_spatsv(lambda, m);
  const int n = s.cutoff();
  auto thin = [&](int k, int j) {
    return std::exp(std::lgamma(k + 1) - std::lgamma(j + 1) - std::lgamma(k - j + 1) + j * std::log(eta) +
                    (k - j) * std::log1p(-eta));
  };
  double d2 = 0.0, d4 = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double pk = std::norm(s[k]);
    for (int a = 0; a <= k; ++a) {
      for (int b = 0; b <= k; ++b) {
        const double w = pk * thin(k, a) * thin(k, b);
        const double d = a - b;
        d2 += w * d * d;
        d4 += w * d * d * d * d;
      }
    }
  }
  double pair = 0.0;
  for (int k = 1; k <= n; ++k) pair += std::real(std::conj(s[k - 1]) * s[k]) * k;
  return std::sqrt(d4 - d2 * d2) / (eta * pair);
}

Outcome dark_fringe_plateau() {
  const double eta = 0.98, lambda = 0.05, mu = 1e8, phi = 1e-9;
  const double plateau = std::sqrt(2.0) * std::sqrt((1.0 - eta) / eta);
  double worst = 0.0;
  for (int m = 0; m <= 3; ++m) {
    const double u = correlated_uncertainty(CorrelatedConfig{{lambda, m, 0.0}, mu, kHalfPi, phi, eta});
    const double ref = dark_fringe_limit(lambda, m, eta);
    note("m=%d: U = %.6f, photon-statistics limit %.6f, plateau %.6f (deviation %.2f%%)", m, u, ref, plateau,
         100 * std::abs(u / plateau - 1.0));
    worst = std::max(worst, std::abs(u / plateau - 1.0));
  }
  return {worst <= 0.05, fmt("worst deviation from sqrt2 sqrt((1-eta)/eta) = %.4f: %.2f%% (<= 5%%)", plateau,
                             100 * worst)};
}

// 8 ---------------------------------------------------------------------------
Outcome dark_fringe_ratios() {
  const double eta = 0.98, lambda = 50.0, mu = 1e8, phi = 1e-9;
  const double k[] = {5.0, 3.0, 13.0 / 5.0, 17.0 / 7.0};
  std::vector<double> u;
  for (int m = 0; m <= 3; ++m) u.push_back(correlated_uncertainty(CorrelatedConfig{{lambda, m, 0.0}, mu, kHalfPi, phi, eta}));
  double worst = 0.0;
  for (int m = 1; m <= 3; ++m) {
    const double r = u[0] / u[static_cast<std::size_t>(m)];
    const double e = std::sqrt(k[0] / k[m]);
    note("U0/U%d = %.4f vs %.4f", m, r, e);
    worst = std::max(worst, std::abs(r / e - 1.0));
  }
  return {worst <= 0.05, fmt("worst ratio deviation %.2f%% (<= 5%%)", 100 * worst)};
}

// 9 ---------------------------------------------------------------------------
Outcome balanced_high_loss() {
  const double eta = 0.8, phi = 1e-8, mu = 1e12, lambda = 2.0;
  std::vector<double> u;
  for (int m : {0, 3}) {
    const double l0 = states::balance_energy(lambda, m, states::StateKind::TwoMode);
    u.push_back(correlated_uncertainty(CorrelatedConfig{{l0, m, 0.0}, mu, kHalfPi, phi, eta}));
    note("m=%d: lambda_0 = %.6f, U = %.6f", m, l0, u.back());
  }
  const double red = 1.0 - u[1] / u[0];
  return {red >= 0.20 && red <= 0.35, fmt("mu=1e12: reduction of m=3 vs m=0 = %.2f%% (in [20%%, 35%%])", 100 * red)};
}

// 10 --------------------------------------------------------------------------
Outcome balancing_null_results() {
  int compared = 0, skipped = 0, violations = 0;
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.1 * std::pow(500.0, i / 10.0));
  for (double lambda : grid) {
    const auto u_of = [&](int m) {
      const double l0 = states::balance_energy(lambda, m, states::StateKind::SingleMode);
      const SingleMziConfig c{{l0, m, 0.0}, 100.0, 0.0, kHalfPi, 0.98};
      return std::make_pair(single_phase_uncertainty(c), qfi(SingleMziConfig{{l0, m, 0.0}, 100.0, 0.0, kHalfPi, 1.0}));
    };
    const auto [u0, f0] = u_of(0);
    for (int m = 1; m <= 4; ++m) {
      if (lambda <= states::mean_photons_infimum(states::StateKind::SingleMode, m)) {
        ++skipped;
        continue;
      }
      const auto [u, f] = u_of(m);
      ++compared;
      if (u0 > u * (1 + 1e-12) || f0 < f * (1 - 1e-12)) {
        ++violations;
        note("violation at lambda=%g m=%d: U0=%.6g U=%.6g F0=%.6g F=%.6g", lambda, m, u0, u, f0, f);
      }
    }
  }
  note("%d balanced comparisons, %d skipped (odd m cannot reach lambda <= 1)", compared, skipped);
  return {violations == 0, fmt("%g violations of U(0) <= U(m) and F_Q(0) >= F_Q(m) over lambda in [0.1, 50]",
                               violations)};
}

// 11 --------------------------------------------------------------------------
Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const char* scene : {"single", "correlated"}) {
    for (double eta : {1.0, 0.8}) {
      for (int m = 0; m <= 2; ++m) {
        experiments::OracleCompareConfig c;
        c.scene = scene;
        c.mu = 2.0;
        c.lambda = 0.3;
        c.m = m;
        c.eta = eta;
        c.phi = 1.0;
        c.psi = std::strcmp(scene, "single") == 0 ? 0.0 : kHalfPi;
        const auto rep = experiments::oracle_compare(c);
        note("%s m=%d eta=%g: %zu quantities, worst relative error %.2e", scene, m, eta, rep.rows.size(),
             rep.worst());
        worst = std::max(worst, rep.worst());
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 120.0, fmt("worst relative error %.2e (<= 1e-8), runtime %.1f s (< 120 s)", worst, t)};
}

// 12 --------------------------------------------------------------------------
Outcome property_suites() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      note("failed: %s", what.c_str());
    }
  };
  const std::vector<double> lambdas{0.01, 0.1, 0.6, 2.0, 8.0};
  for (double l : lambdas) {
    for (int m = 0; m <= 4; ++m) {
      const auto s1 = states::passv({l, m, 0.3});
      const auto s2 = states::spatsv({l, m, 0.3});
      check(std::abs(s1.norm_squared() - 1.0) <= 1e-12, "PASSV normalization");
      check(std::abs(s2.norm_squared() - 1.0) <= 1e-12, "SPATSV normalization");
      const auto t1 = table_from_state(s1, 2);
      for (double th : {0.0, 0.5, 1.2}) {
        check(quadrature_variance(t1, th) * quadrature_variance(t1, th + kHalfPi) >= 0.25 - 1e-12, "Heisenberg bound");
      }
      const auto t2 = table_from_state(s2, 4);
      const auto a = apply_loss(apply_loss(t2, 0.9), 0.8);
      const auto b = apply_loss(t2, 0.72);
      for (int p = 0; p <= 2; ++p) {
        for (int r = 0; p + r <= 2; ++r) {
          const auto ref = b.value(p, p, r, r);
          check(std::abs(a.value(p, p, r, r) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)), "loss composition");
        }
      }
      const double q = mandel_q(t2);
      check(std::abs(mandel_q(apply_loss(t2, 0.7)) - 0.7 * q) <= 1e-10 * std::max(1.0, std::abs(q)), "Mandel thinning");
    }
  }
  const double q2 = mandel_q(table_from_state(states::spatsv({0.1, 2, 0.0}), 4));
  note("Mandel Q of SPATSV m=2, lambda=0.1: %.6f", q2);
  check(q2 < 0.0, "Mandel negativity");
  for (int m = 0; m <= 3; ++m) {
    const double r = nrf(CorrelatedConfig{{0.5, m, 0.0}, 0.0, kHalfPi, 0.0, 1.0});
    check(std::abs(r) <= 1e-12, "NRF = 0 at phi=0, mu=0, eta=1");
  }
  return {failures == 0, fmt("%g property failures (normalization, Heisenberg, loss composition, thinning, "
                             "negativity, NRF zero)",
                             failures)};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  set_working_digits(digits_from_environment());

  const std::vector<Criterion> all{
      {1, "mean-photon closed forms", mean_photon_closed_forms},
      {2, "representation equivalence", representation_equivalence},
      {3, "QFI asymptotics", qfi_asymptotics},
      {4, "Cramer-Rao consistency", cramer_rao},
      {5, "NRF large-lambda law", nrf_large_lambda},
      {6, "NRF small-lambda asymptotics", nrf_small_lambda},
      {7, "dark-fringe plateau", dark_fringe_plateau},
      {8, "dark-fringe high-lambda ratios", dark_fringe_ratios},
      {9, "high-loss balanced advantage", balanced_high_loss},
      {10, "energy-balancing null results", balancing_null_results},
      {11, "oracle equivalence", oracle_equivalence},
      {12, "property suites", property_suites},
  };
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::printf("criterion %d (%s)\n", c.id, c.title);
    std::fflush(stdout);
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.summary.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}

#include "psqm/metrology.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "psqm/errors.hpp"
#include "psqm/moments.hpp"
#include "psqm/opalg.hpp"

namespace psqm {

namespace {

using opalg::Expectation;
using opalg::LinearModeMap;
using opalg::Subsystem;
using Poly = opalg::OperatorPolynomial<HpComplex>;
using JetPoly = opalg::OperatorPolynomial<HpJet>;

constexpr double kStateTail = 1e-32;
// Largest accepted absolute error of a reported figure of merit.
constexpr double kResultTolerance = 1e-9;

// ---- input tables ----------------------------------------------------------

enum class Source { Passv, Spatsv };

using TableKey = std::tuple<int, double, int, double, int, unsigned>;

std::shared_ptr<const MomentTable> input_table(Source src, double lambda, int m, double chi, int order) {
  static std::mutex mu;
  static std::map<TableKey, std::shared_ptr<const MomentTable>> cache;
  const TableKey key{static_cast<int>(src), lambda, m, chi, order, working_digits()};
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  std::shared_ptr<const MomentTable> t;
  const fock::CutoffPolicy policy{std::nullopt, kStateTail};
  if (src == Source::Passv) {
    t = std::make_shared<const MomentTable>(table_from_state(states::passv({lambda, m, chi}, policy), order));
  } else {
    t = std::make_shared<const MomentTable>(table_from_state(states::spatsv({lambda, m, chi}, policy), order));
  }
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 256) cache.clear();
  cache.emplace(key, t);
  return t;
}

// ---- jets and maps ---------------------------------------------------------

const HpComplex kI(Real(0), Real(1));

HpJet along(int dir, HpComplex v, HpComplex d) {
  HpJet j(std::move(v));
  if (dir == 1) j.d1 = std::move(d);
  if (dir == 2) j.d2 = std::move(d);
  return j;
}

struct HalfAngle {
  HpJet c, s;
};

// cos(phi/2), sin(phi/2) as jets in the phase variable `dir`.
HalfAngle half_angle(double phi, int dir) {
  const Real h = Real(phi) / 2;
  const Real c = boost::multiprecision::cos(h);
  const Real s = boost::multiprecision::sin(h);
  return {along(dir, HpComplex(c), HpComplex(-s / 2)), along(dir, HpComplex(s), HpComplex(c / 2))};
}

HpJet real_jet(const Real& x) { return HpJet(HpComplex(x)); }

HpComplex coherent_amplitude(double mu, double psi) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) raise(ErrorKind::OutOfRange, "coherent mean photon number must be >= 0");
  return hp_polar(boost::multiprecision::sqrt(Real(mu)), Real(psi));
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) raise(ErrorKind::OutOfRange, "efficiency must lie in [0, 1]");
}

LinearModeMap<HpComplex> value_part(const LinearModeMap<HpJet>& jm) {
  LinearModeMap<HpComplex> out;
  for (int j = 0; j < opalg::kMaxModes; ++j) {
    const auto& img = jm.image(j);
    if (!img) continue;
    std::vector<std::pair<int, HpComplex>> terms;
    for (const auto& [k, u] : img->terms) terms.emplace_back(k, u.v);
    out.map(j, std::move(terms), img->shift.v);
  }
  return out;
}

// Output row sqrt(eta) (c a_q + i s (a_coh + alpha)) + sqrt(1 - eta) v.
void interferometer_row(LinearModeMap<HpJet>& map, int out, int quantum, int coherent, int ancilla,
                        const HpJet& tq, const HpJet& tc, const HpComplex& alpha, const Real& root_eta,
                        const Real& root_loss) {
  const HpJet e = real_jet(root_eta);
  std::vector<std::pair<int, HpJet>> terms{{quantum, e * tq}, {coherent, e * tc}};
  if (root_loss != 0) terms.emplace_back(ancilla, real_jet(root_loss));
  map.map(out, std::move(terms), e * tc * alpha);
}

// ---- single interferometer -------------------------------------------------
// modes: 0 quantum input, 1 coherent input (displaced to vacuum), 2 and 3 loss
// ancillas, 4 and 5 the outputs c and d.

constexpr int kSingleC = 4;
constexpr int kSingleD = 5;

struct Scene {
  LinearModeMap<HpJet> map;
  std::vector<Subsystem> subs;
};

Scene single_scene(const SingleMziConfig& cfg, int order) {
  check_eta(cfg.eta);
  const HpComplex alpha = coherent_amplitude(cfg.mu, cfg.psi);
  const auto table = input_table(Source::Passv, cfg.input.lambda, cfg.input.m, cfg.input.chi, order);
  const auto [c, s] = half_angle(cfg.phi, 1);
  const Real re = boost::multiprecision::sqrt(Real(cfg.eta));
  const Real rl = boost::multiprecision::sqrt(Real(1) - Real(cfg.eta));
  Scene sc;
  interferometer_row(sc.map, kSingleC, 0, 1, 2, c, s * kI, alpha, re, rl);
  interferometer_row(sc.map, kSingleD, 0, 1, 3, s * kI, c, alpha, re, rl);
  sc.subs = {Subsystem::single_mode(0, table), Subsystem::vacuum(1), Subsystem::vacuum(2), Subsystem::vacuum(3)};
  return sc;
}

// ---- correlated scheme -----------------------------------------------------
// modes: 0, 1 quantum inputs (ports 1, 2), 2, 3 coherent inputs (ports 3, 4)
// displaced to vacuum, 4, 5 loss ancillas, 6, 7 read-out ports 5 and 7.

constexpr int kPort5 = 6;
constexpr int kPort7 = 7;

LinearModeMap<HpJet> correlated_map(const CorrelatedConfig& cfg) {
  check_eta(cfg.eta);
  const HpComplex alpha = coherent_amplitude(cfg.mu, cfg.psi);
  const Real re = boost::multiprecision::sqrt(Real(cfg.eta));
  const Real rl = boost::multiprecision::sqrt(Real(1) - Real(cfg.eta));
  LinearModeMap<HpJet> map;
  const auto h1 = half_angle(cfg.phi, 1);
  const auto h2 = half_angle(cfg.phi, 2);
  interferometer_row(map, kPort5, 0, 2, 4, h1.c, h1.s * kI, alpha, re, rl);
  interferometer_row(map, kPort7, 1, 3, 5, h2.c, h2.s * kI, alpha, re, rl);
  return map;
}

std::vector<Subsystem> correlated_inputs(const CorrelatedConfig& cfg, int order) {
  const auto table = input_table(Source::Spatsv, cfg.input.lambda, cfg.input.m, cfg.input.chi, order);
  return {Subsystem::two_mode(0, 1, table), Subsystem::vacuum(2), Subsystem::vacuum(3), Subsystem::vacuum(4),
          Subsystem::vacuum(5)};
}

std::vector<Subsystem> double_squeezing_inputs(const CorrelatedConfig& cfg, int order) {
  const auto table = input_table(Source::Passv, cfg.input.lambda, 0, 2.0 * cfg.psi, order);
  return {Subsystem::single_mode(0, table), Subsystem::single_mode(1, table), Subsystem::vacuum(2),
          Subsystem::vacuum(3), Subsystem::vacuum(4), Subsystem::vacuum(5)};
}

// ---- evaluation helpers ----------------------------------------------------

struct Estimate {
  Real value;
  double error;
};

Estimate variance(const Poly& p, const std::vector<Subsystem>& subs) {
  const auto mean = opalg::expect(p, subs);
  const Poly centered = opalg::center(p, mean.value);
  const auto v = opalg::expect_product(centered, centered, subs);
  return {v.value.re, v.error_bound() + 2.0 * mean.error_bound() * mean.error_bound()};
}

// sqrt of a variance known to +-err; zero within the bound is accepted.
Real checked_sqrt(const Estimate& var) {
  if (var.value <= Real(var.error)) return Real(0);
  return boost::multiprecision::sqrt(var.value);
}

void require_accuracy(double value, double error, const std::string& what) {
  if (!(error <= kResultTolerance * std::max(1.0, std::abs(value)))) {
    raise(ErrorKind::PrecisionInsufficient,
          what + ": estimated error " + std::to_string(error) + " at " + std::to_string(working_digits()) +
              " digits; raise PSQM_PRECISION_DIGITS");
  }
}

// Relative error of sqrt(var) given the absolute error of var.
double sqrt_relative_error(const Estimate& var) {
  if (var.value <= Real(var.error)) return 0.0;
  return var.error / (2.0 * to_double(var.value));
}

Poly difference_of_numbers(int a, int b) { return Poly::number(a) - Poly::number(b); }

ReadoutMoments moments_of(const LinearModeMap<HpComplex>& map, const std::vector<Subsystem>& subs, int a, int b) {
  ReadoutMoments out;
  for (int p = 0; p <= 4; ++p) {
    Poly np = Poly::identity();
    for (int k = 0; k < p; ++k) np = opalg::multiply(np, Poly::number(a));
    for (int q = 0; p + q <= 4; ++q) {
      Poly npq = np;
      for (int k = 0; k < q; ++k) npq = opalg::multiply(npq, Poly::number(b));
      const auto e = opalg::expect(opalg::substitute(npq, map), subs);
      out[{p, q}] = to_double(e.value.re);
    }
  }
  return out;
}

struct CorrelatedEval {
  Estimate var;
  Real mean;
  Real mixed;
  double mixed_error;
};

CorrelatedEval evaluate_correlated(const LinearModeMap<HpJet>& jmap, const std::vector<Subsystem>& subs) {
  const JetPoly d = JetPoly::number(kPort5) - JetPoly::number(kPort7);
  const JetPoly dj = opalg::substitute(d, jmap);
  const JetPoly cj = opalg::multiply(dj, dj);
  const auto mean = opalg::expect(cj, subs);

  const Poly dv = opalg::substitute(difference_of_numbers(kPort5, kPort7), value_part(jmap));
  const Poly cv = opalg::multiply(dv, dv);
  return {variance(cv, subs), mean.value.v.re, mean.value.d12.re, mean.error_bound()};
}

double normalized_correlated(const CorrelatedConfig& cfg, const CorrelatedEval& ev) {
  const double cl = classical_correlated_uncertainty(cfg.eta, cfg.mu, cfg.phi);
  const Real mixed = boost::multiprecision::abs(ev.mixed);
  if (mixed <= Real(ev.mixed_error) || mixed == 0) {
    raise(ErrorKind::Singular, "vanishing mixed phase derivative of <C>");
  }
  const Real sd = checked_sqrt(ev.var);
  const double u = to_double(boost::multiprecision::sqrt(Real(2)) * sd / mixed) / cl;
  const double rel = sqrt_relative_error(ev.var) + ev.mixed_error / to_double(mixed);
  require_accuracy(u, u * rel, "normalized correlated uncertainty");
  return u;
}

}  // namespace

// ---- public ----------------------------------------------------------------

double CorrelatedConfig::tau() const {
  const double c = std::cos(phi / 2.0);
  return c * c;
}

double phi_from_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) raise(ErrorKind::OutOfRange, "tau must lie in [0, 1]");
  return 2.0 * std::acos(std::sqrt(tau));
}

std::pair<double, double> single_mean_and_slope(const SingleMziConfig& cfg) {
  const Scene sc = single_scene(cfg, 4);
  const JetPoly o = opalg::substitute(JetPoly::number(kSingleD) - JetPoly::number(kSingleC), sc.map);
  const auto e = opalg::expect(o, sc.subs);
  return {to_double(e.value.v.re), to_double(e.value.d1.re)};
}

double single_phase_uncertainty(const SingleMziConfig& cfg) {
  const Scene sc = single_scene(cfg, 4);
  const JetPoly o = opalg::substitute(JetPoly::number(kSingleD) - JetPoly::number(kSingleC), sc.map);
  const auto mean = opalg::expect(o, sc.subs);
  const Real slope = boost::multiprecision::abs(mean.value.d1.re);
  const double n_quantum = to_double(sc.subs[0].table->at(1, 1).re);
  const double scale = cfg.eta * (cfg.mu + n_quantum);
  if (slope <= Real(mean.error_bound() + 1e-12 * scale) || scale == 0.0) {
    raise(ErrorKind::Singular, "d<o>/dphi vanishes: mean photon numbers balance or phi is a fringe extremum");
  }
  const Estimate var = variance(opalg::substitute(difference_of_numbers(kSingleD, kSingleC), value_part(sc.map)),
                                sc.subs);
  const double u = to_double(checked_sqrt(var) / slope);
  const double rel = sqrt_relative_error(var) + mean.error_bound() / to_double(slope);
  require_accuracy(u, u * rel, "single-interferometer uncertainty");
  return u;
}

double qfi(const SingleMziConfig& cfg) {
  const HpComplex alpha = coherent_amplitude(cfg.mu, cfg.psi);
  const auto table = input_table(Source::Passv, cfg.input.lambda, cfg.input.m, cfg.input.chi, 4);
  const Real h = boost::multiprecision::sqrt(Real(2)) / 2;
  LinearModeMap<HpComplex> map;
  map.map(2, {{0, HpComplex(h)}, {1, HpComplex(h)}}, HpComplex(alpha.re * h, alpha.im * h));
  const std::vector<Subsystem> subs{Subsystem::single_mode(0, table), Subsystem::vacuum(1)};
  const Estimate var = variance(opalg::substitute(Poly::number(2), map), subs);
  const double f = 4.0 * to_double(var.value);
  require_accuracy(f, 4.0 * var.error, "quantum Fisher information");
  return std::max(f, 0.0);
}

double cramer_rao_bound(double fq) {
  if (!(fq > 0.0)) raise(ErrorKind::NonPositiveQfi, "Cramer-Rao bound needs a positive Fisher information");
  return 1.0 / std::sqrt(fq);
}

double nrf(const CorrelatedConfig& cfg) {
  const auto map = value_part(correlated_map(cfg));
  const auto subs = correlated_inputs(cfg, 4);
  const Estimate var = variance(opalg::substitute(difference_of_numbers(kPort5, kPort7), map), subs);
  const auto den = opalg::expect(opalg::substitute(Poly::number(kPort5) + Poly::number(kPort7), map), subs);
  const Real d = den.value.re;
  if (d <= Real(den.error_bound()) || d <= Real(1e-300)) {
    raise(ErrorKind::ZeroMeanPhoton, "no photons reach the read-out ports");
  }
  const Real v = var.value <= Real(var.error) ? Real(0) : var.value;
  const double r = to_double(v / d);
  require_accuracy(r, (var.error + r * den.error_bound()) / to_double(d), "noise reduction factor");
  return r;
}

double nrf_asymptotic(int m, double tau, double lambda) {
  const double s = std::sqrt(lambda);
  switch (m) {
    case 0:
      return 1.0 - 2.0 * tau * (s - lambda);
    case 1:
      return 1.0 - 4.0 * tau * (s - 2.0 * lambda);
    case 2:
      return 1.0 - 6.0 * tau * (s - 3.0 * lambda);
    default:
      raise(ErrorKind::UnsupportedOrder, "small-lambda NRF closed form exists for m <= 2 only");
  }
}

double classical_correlated_uncertainty(double eta, double mu, double phi) {
  const double c = std::cos(phi / 2.0);
  const double den = eta * mu * c * c;
  if (!(den > 0.0)) raise(ErrorKind::Singular, "classical reference undefined for eta mu tau = 0");
  return std::sqrt(2.0) / den;
}

CorrelatedDetail correlated_detail(const CorrelatedConfig& cfg) {
  const auto ev = evaluate_correlated(correlated_map(cfg), correlated_inputs(cfg, 8));
  const Real mixed = boost::multiprecision::abs(ev.mixed);
  const Real var = ev.var.value < 0 ? Real(0) : ev.var.value;
  const double u = mixed == 0 ? std::numeric_limits<double>::infinity()
                              : to_double(boost::multiprecision::sqrt(2 * var) / mixed);
  return {to_double(ev.var.value), to_double(ev.mean), to_double(ev.mixed), u};
}

double correlated_mean(const CorrelatedConfig& cfg, double phi1, double phi2) {
  CorrelatedConfig a = cfg;
  a.phi = phi1;
  CorrelatedConfig b = cfg;
  b.phi = phi2;
  // rows come from configs with the requested phases
  const auto m1 = correlated_map(a);
  const auto m2 = correlated_map(b);
  LinearModeMap<HpJet> mixed;
  for (int out : {kPort5, kPort7}) {
    const auto& img = (out == kPort5 ? m1 : m2).image(out);
    mixed.map(out, img->terms, img->shift);
  }
  const Poly d = opalg::substitute(difference_of_numbers(kPort5, kPort7), value_part(mixed));
  const auto e = opalg::expect(opalg::multiply(d, d), correlated_inputs(cfg, 8));
  return to_double(e.value.re);
}

double correlated_uncertainty(const CorrelatedConfig& cfg) {
  return normalized_correlated(cfg, evaluate_correlated(correlated_map(cfg), correlated_inputs(cfg, 8)));
}

double correlated_uncertainty_double_squeezing(const CorrelatedConfig& cfg) {
  return normalized_correlated(cfg, evaluate_correlated(correlated_map(cfg), double_squeezing_inputs(cfg, 8)));
}

double correlated_uncertainty_asymptotic(AsymptoticRegime regime, int m, double tau, double eta, double lambda) {
  if (m < 0 || m > 3) raise(ErrorKind::UnsupportedOrder, "correlated closed forms exist for m <= 3 only");
  const double r2 = std::sqrt(2.0);
  const double s = std::sqrt(lambda);
  const double te = tau * eta;
  switch (regime) {
    case AsymptoticRegime::LowLambdaBright:
      switch (m) {
        case 0:
          return r2 * (1.0 - te * (2.0 * s - 2.0 * lambda));
        case 1:
          return r2 * (1.0 - te * (4.0 * s + 0.5 * lambda * (3.0 * te - 16.0)));
        case 2:
          return r2 * (1.0 - te * (6.0 * s + 4.5 * lambda * (te - 4.0)));
        default:
          return r2 * (1.0 - te * (8.0 * s + lambda * (9.0 * te - 32.0)));
      }
    case AsymptoticRegime::HighLambdaBright:
      return r2 * (1.0 - te - te / (4.0 * lambda));
    case AsymptoticRegime::DarkFringeLowLambda:
      return r2 * std::sqrt((1.0 - eta) / eta);
    case AsymptoticRegime::DarkFringeHighLambda: {
      static constexpr double k[] = {5.0, 3.0, 13.0 / 5.0, 17.0 / 7.0};
      return 2.0 * std::sqrt(k[m]) * (1.0 - eta);
    }
  }
  raise(ErrorKind::OutOfRange, "unknown asymptotic regime");
}

ReadoutMoments readout_moments(const SingleMziConfig& cfg) {
  const Scene sc = single_scene(cfg, 8);
  return moments_of(value_part(sc.map), sc.subs, kSingleC, kSingleD);
}

ReadoutMoments readout_moments(const CorrelatedConfig& cfg) {
  return moments_of(value_part(correlated_map(cfg)), correlated_inputs(cfg, 8), kPort5, kPort7);
}

}  // namespace psqm

#pragma once

// Figures of merit for the single Mach-Zehnder interferometer and the
// correlated double-interferometer scheme, evaluated with the operator
// polynomial engine on factorized inputs. Coherent beams enter as vacuum
// plus a c-number displacement; detection loss is a beamsplitter to a vacuum
// ancilla; phase derivatives are carried exactly by jet coefficients.

#include <map>
#include <utility>

#include "psqm/states.hpp"

namespace psqm {

struct SingleMziConfig {
  states::PassvSpec input;
  double mu = 0.0;
  double psi = 0.0;
  double phi = 1.5707963267948966;
  double eta = 1.0;
};

struct CorrelatedConfig {
  states::SpatsvSpec input;
  double mu = 0.0;
  double psi = 1.5707963267948966;
  double phi = 0.0;  // phi_1 = phi_2
  double eta = 1.0;

  double tau() const;  // cos^2(phi/2)
};

// phi with cos^2(phi/2) = tau, in [0, pi].
double phi_from_tau(double tau);

// sqrt(Var o) / |d<o>/dphi| with o = N_d - N_c the output photon-number
// difference; <o> = eta (mu - <N_quantum>) cos phi.
double single_phase_uncertainty(const SingleMziConfig& cfg);

// <o> and d<o>/dphi, exposed for finite-difference checks.
std::pair<double, double> single_mean_and_slope(const SingleMziConfig& cfg);

// 4 Var(n_3), a_3 = (a_1 + a_2)/sqrt 2, on the lossless input.
double qfi(const SingleMziConfig& cfg);

double cramer_rao_bound(double fq);

// Var(N_5 - N_7) / (<N_5> + <N_7>).
double nrf(const CorrelatedConfig& cfg);

// Small-lambda closed forms, m = 0, 1, 2.
double nrf_asymptotic(int m, double tau, double lambda);

// Normalized uncertainty U = U_abs / U_cl with
//   U_abs = sqrt(2 Var C) / |d^2 <C> / dphi_1 dphi_2|,  C = (N_5 - N_7)^2,
//   U_cl  = sqrt 2 / (eta mu tau).
double correlated_uncertainty(const CorrelatedConfig& cfg);
// Same scheme with two independent single-mode squeezed vacua of lambda
// photons each, squeezed along the quadrature the read-out measures.
double correlated_uncertainty_double_squeezing(const CorrelatedConfig& cfg);

double classical_correlated_uncertainty(double eta, double mu, double phi);

// Unnormalized U_abs and the double derivative, for cross-checks.
struct CorrelatedDetail {
  double variance;        // Var C
  double mean;            // <C>
  double mixed_derivative;  // d^2 <C> / dphi_1 dphi_2
  double uncertainty;     // U_abs
};
CorrelatedDetail correlated_detail(const CorrelatedConfig& cfg);
// <C> at independent phases, for finite-difference checks.
double correlated_mean(const CorrelatedConfig& cfg, double phi1, double phi2);

enum class AsymptoticRegime {
  LowLambdaBright,   // mu >> 1, lambda << 1
  HighLambdaBright,  // mu >> lambda >> 1
  DarkFringeLowLambda,
  DarkFringeHighLambda,
};

double correlated_uncertainty_asymptotic(AsymptoticRegime regime, int m, double tau, double eta, double lambda);

// <N_a^p N_b^q> for p + q <= 4 at the two read-out ports: (c, d) for the
// single interferometer, (5, 7) for the correlated scheme.
using ReadoutMoments = std::map<std::pair<int, int>, double>;
ReadoutMoments readout_moments(const SingleMziConfig& cfg);
ReadoutMoments readout_moments(const CorrelatedConfig& cfg);

}  // namespace psqm

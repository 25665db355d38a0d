#pragma once

#include <complex>

#include "psqm/fock.hpp"
#include "psqm/numeric.hpp"

namespace psqm::states {

// m photons annihilated from a squeezed vacuum with lambda = sinh^2 r.
struct PassvSpec {
  double lambda = 0.0;
  int m = 0;
  double chi = 0.0;
};

// m photons annihilated from each mode of a two-mode squeezed vacuum with
// lambda mean photons per mode.
struct SpatsvSpec {
  double lambda = 0.0;
  int m = 0;
  double chi = 0.0;
};

enum class StateKind { SingleMode, TwoMode };

std::complex<double> legendre_p(int m, std::complex<double> x);
Rational legendre_p(int m, const Rational& x);

double squeezing_parameter(double lambda);  // asinh(sqrt(lambda))

fock::FockState1 passv(const PassvSpec& spec, const fock::CutoffPolicy& policy = {});
fock::TwoModeDiagonalState spatsv(const SpatsvSpec& spec, const fock::CutoffPolicy& policy = {});

// Finite superpositions whose squeezing reproduces the states above.
fock::FockState1 passv_seed(const PassvSpec& spec);
fock::TwoModeDiagonalState spatsv_seed(const SpatsvSpec& spec);

// S(r e^{i chi}) |seed> and S_12(r e^{i chi}) |seed>, built by expanding the
// seed in squeezed creation operators acting on the squeezed vacuum.
fock::FockState1 squeeze(const fock::FockState1& seed, double lambda, double chi,
                         const fock::CutoffPolicy& policy = {std::nullopt, 1e-24});
fock::TwoModeDiagonalState two_mode_squeeze(const fock::TwoModeDiagonalState& seed, double lambda, double chi,
                                            const fock::CutoffPolicy& policy = {std::nullopt, 1e-24});

// ||a^m S|0>||^2 = m! (-i sqrt(lambda))^m P_m(i sqrt(lambda)).
double passv_norm_squared(double lambda, int m);
// ||a1^m a2^m S_12|0,0>||^2 = (m!)^2 lambda^m P_m(2 lambda + 1).
double spatsv_norm_squared(double lambda, int m);

// Closed forms for m <= 3; larger m from the truncated Fock state.
double passv_mean_photons(double lambda, int m);
// Mean photon number per mode, from the normalized Fock coefficients.
double spatsv_mean_photons(double lambda, int m);

double mean_photons(StateKind kind, double lambda, int m);
// lim_{lambda -> 0} of the mean photon map.
double mean_photons_infimum(StateKind kind, int m);

// lambda_0 with mean_photons(kind, lambda_0, m) == target, by bisection.
double balance_energy(double target, int m, StateKind kind);

}  // namespace psqm::states

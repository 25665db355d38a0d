#pragma once

#include <vector>

#include "psqm/fock.hpp"
#include "psqm/moment_table.hpp"

namespace psqm {

enum class Accumulation {
  Auto,      // extended precision unless the summation is very long
  Extended,  // working-precision Real
  LongDouble,
};

// Moments by direct Fock summation. Amplitudes are promoted to Real before
// any product is formed, so with Extended accumulation all entries are the
// exact moments of one normalized state up to working precision.
MomentTable table_from_state(const fock::FockState1& state, int max_order,
                             Accumulation acc = Accumulation::Auto);
MomentTable table_from_state(const fock::TwoModeDiagonalState& state, int max_order,
                             Accumulation acc = Accumulation::Auto);

// Detection through a beamsplitter of transmission eta with vacuum in the
// other port: every entry is scaled by eta^{degree/2}.
MomentTable apply_loss(const MomentTable& table, double eta);

// Var(X_theta), X_theta = (a e^{-i theta} + a^dag e^{i theta})/sqrt 2, of the
// given mode of the table.
double quadrature_variance(const MomentTable& table, double theta, int mode = 0);

// Var(X_{1,theta} - X_{2,theta}) / 2; vacuum gives 0.5.
double quadrature_difference_variance(const MomentTable& table, double theta);

// (Var N - <N>) / <N> of the given mode.
double mandel_q(const MomentTable& table, int mode = 0);

double mean_photons(const MomentTable& table, int mode = 0);

struct JointDistribution {
  int dim = 0;
  std::vector<double> p;  // row-major P(j,k)
  double at(int j, int k) const { return p[static_cast<std::size_t>(j * dim + k)]; }
};

JointDistribution joint_photon_distribution(const fock::TwoModeDiagonalState& state);
std::vector<double> marginal_distribution(const JointDistribution& joint);

}  // namespace psqm

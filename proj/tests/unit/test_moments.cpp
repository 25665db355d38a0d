#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "psqm/errors.hpp"
#include "psqm/moments.hpp"
#include "psqm/states.hpp"

using namespace psqm;

TEST(Moments, VacuumReferenceValues) {
  const auto t = table_from_state(fock::FockState1(), 4);
  EXPECT_NEAR(quadrature_variance(t, 0.3), 0.5, 1e-15);
  const auto t2 = table_from_state(fock::TwoModeDiagonalState(), 4);
  EXPECT_NEAR(quadrature_difference_variance(t2, 1.1), 0.5, 1e-15);
  EXPECT_THROW(mandel_q(t), Error);
}

TEST(Moments, AccumulationModesAgree) {
  const auto s = states::spatsv({0.8, 2, 0.2});
  const auto a = table_from_state(s, 4, Accumulation::Extended);
  const auto b = table_from_state(s, 4, Accumulation::LongDouble);
  for (int p = 0; p <= 2; ++p) {
    for (int r = 0; p + r <= 2; ++r) {
      EXPECT_NEAR(std::abs(a.value(p, p, r, r) - b.value(p, p, r, r)), 0.0, 1e-12 * std::abs(a.value(p, p, r, r)));
    }
  }
  EXPECT_GE(a.digits(), b.digits());
}

TEST(Moments, TwoModeTableSelectionRule) {
  const auto t = table_from_state(states::spatsv({0.5, 1, 0.0}), 4);
  EXPECT_EQ(t.value(1, 0, 0, 0), std::complex<double>(0.0));
  EXPECT_EQ(t.value(2, 1, 0, 0), std::complex<double>(0.0));
  EXPECT_NE(t.value(0, 1, 0, 1), std::complex<double>(0.0));
  EXPECT_NEAR(t.value(1, 1, 0, 0).real(), states::spatsv_mean_photons(0.5, 1), 1e-10);
}

TEST(Moments, LossScalesByDegree) {
  const auto t = table_from_state(states::passv({0.7, 1, 0.0}), 4);
  const auto l = apply_loss(t, 0.64);
  EXPECT_NEAR(std::abs(l.value(1, 1) - 0.64 * t.value(1, 1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(l.value(0, 2) - 0.64 * t.value(0, 2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(l.value(1, 2) - std::pow(0.8, 3) * t.value(1, 2)), 0.0, 1e-14);
  EXPECT_THROW(apply_loss(t, 1.5), Error);
}

TEST(Moments, MandelOfCoherentIsZeroAndThermalIsMean) {
  const auto c = table_from_state(fock::coherent_state(1.3), 4);
  EXPECT_NEAR(mandel_q(c), 0.0, 1e-11);
  // each TSV mode is thermal: Q = <N>
  const auto t = table_from_state(fock::two_mode_squeezed_vacuum(0.9, 0.0), 4);
  EXPECT_NEAR(mandel_q(t, 0), 0.9, 1e-10);
  EXPECT_NEAR(mandel_q(t, 1), 0.9, 1e-10);
}

TEST(Moments, JointDistributionIsDiagonalAndNormalized) {
  const auto d = joint_photon_distribution(states::spatsv({0.6, 1, 0.0}));
  double total = 0.0;
  for (int j = 0; j < d.dim; ++j) {
    for (int k = 0; k < d.dim; ++k) {
      if (j != k) EXPECT_EQ(d.at(j, k), 0.0);
      total += d.at(j, k);
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto marg = marginal_distribution(d);
  EXPECT_NEAR(std::accumulate(marg.begin(), marg.end(), 0.0), 1.0, 1e-12);
  // m = 1 subtraction from a TSV: P(n,n) ~ (n+1)^2 x^n
  const double x = 0.6 / 1.6;
  EXPECT_NEAR(d.at(1, 1) / d.at(0, 0), 4 * x, 1e-12);
}

TEST(Moments, QuadratureVarianceIsPiPeriodic) {
  const auto t = table_from_state(states::passv({0.4, 2, 0.5}), 2);
  EXPECT_NEAR(quadrature_variance(t, 0.2), quadrature_variance(t, 0.2 + M_PI), 1e-13);
}

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "psqm/errors.hpp"
#include "psqm/metrology.hpp"
#include "psqm/moments.hpp"
#include "psqm/states.hpp"

using namespace psqm;

namespace {

struct Sample {
  double lambda;
  int m;
  double chi;
};

std::vector<Sample> samples(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> log_lambda(-2.0, 1.0);
  std::uniform_int_distribution<int> order(0, 4);
  std::uniform_real_distribution<double> phase(-M_PI, M_PI);
  std::vector<Sample> out;
  for (int i = 0; i < count; ++i) out.push_back({std::pow(10.0, log_lambda(rng)), order(rng), phase(rng)});
  return out;
}

}  // namespace

TEST(Properties, StatesAreNormalized) {
  for (const auto& s : samples(20, 1)) {
    EXPECT_NEAR(states::passv({s.lambda, s.m, s.chi}).norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(states::spatsv({s.lambda, s.m, s.chi}).norm_squared(), 1.0, 1e-12);
  }
}

TEST(Properties, HeisenbergBound) {
  for (const auto& s : samples(20, 2)) {
    const auto t = table_from_state(states::passv({s.lambda, s.m, s.chi}), 2);
    for (double th : {0.0, 0.4, 1.3}) {
      EXPECT_GE(quadrature_variance(t, th) * quadrature_variance(t, th + M_PI / 2), 0.25 - 1e-12);
    }
  }
}

TEST(Properties, LossComposes) {
  for (const auto& s : samples(10, 3)) {
    const auto t = table_from_state(states::spatsv({s.lambda, s.m, s.chi}), 4);
    const auto a = apply_loss(apply_loss(t, 0.9), 0.7);
    const auto b = apply_loss(t, 0.63);
    for (int p = 0; p <= 2; ++p) {
      for (int r = 0; p + r <= 2; ++r) {
        const auto x = a.value(p, p, r, r), y = b.value(p, p, r, r);
        EXPECT_NEAR(std::abs(x - y), 0.0, 1e-12 * std::max(1.0, std::abs(y)));
      }
    }
  }
}

TEST(Properties, MandelThinning) {
  for (const auto& s : samples(10, 4)) {
    const auto t = table_from_state(states::spatsv({s.lambda, s.m, s.chi}), 4);
    const double q = mandel_q(t);
    for (double eta : {0.98, 0.5, 0.1}) EXPECT_NEAR(mandel_q(apply_loss(t, eta)), eta * q, 1e-10 * std::max(1.0, std::abs(q)));
  }
}

TEST(Properties, MandelNegativityOfSpatsv) {
  const auto t = table_from_state(states::spatsv({0.1, 2, 0.0}), 4);
  EXPECT_LT(mandel_q(t), 0.0);
  const auto tsv = table_from_state(states::spatsv({0.1, 0, 0.0}), 4);
  EXPECT_GT(mandel_q(tsv), 0.0);
}

TEST(Properties, NrfVanishesForPerfectTwinBeam) {
  for (int m = 0; m <= 3; ++m) {
    const CorrelatedConfig c{{0.7, m, 0.0}, 0.0, M_PI / 2, 0.0, 1.0};
    EXPECT_NEAR(nrf(c), 0.0, 1e-12) << m;
  }
}

TEST(Properties, SeedEquivalenceAcrossGrid) {
  for (const auto& s : samples(8, 5)) {
    const auto d = states::passv({s.lambda, s.m, s.chi});
    const auto q = states::squeeze(states::passv_seed({s.lambda, s.m, s.chi}), s.lambda, s.chi);
    EXPECT_GE(fock::fidelity(d, q), 1.0 - 1e-12) << s.lambda << " " << s.m;
  }
}

TEST(Properties, CramerRaoOverRandomGrid) {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> mu(1.0, 200.0);
  for (const auto& s : samples(8, 7)) {
    const SingleMziConfig c{{s.lambda, s.m % 3, 0.0}, mu(rng), 0.0, M_PI / 2, 1.0};
    try {
      EXPECT_GE(single_phase_uncertainty(c) * std::sqrt(qfi(c)), 1.0 - 1e-9);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Singular);
    }
  }
}

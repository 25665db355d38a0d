#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "psqm/errors.hpp"
#include "psqm/metrology.hpp"
#include "psqm/oracle.hpp"
#include "psqm/states.hpp"

using namespace psqm;
using namespace psqm::fock;

namespace {

const double kH = 1.0 / std::sqrt(2.0);
const Matrix2 kHadamard{{{Amplitude(kH), Amplitude(kH)}, {Amplitude(kH), Amplitude(-kH)}}};

MultiModeState fock_pair(int n0, int n1) {
  MultiModeState s({n0 + 1, n1 + 1});
  s.at({n0, n1}) = 1.0;
  return s;
}

}  // namespace

TEST(Oracle, HongOuMandelDip) {
  const auto out = fock_pair(1, 1).apply_beamsplitter(0, 1, kHadamard);
  EXPECT_NEAR(std::norm(out.at({1, 1})), 0.0, 1e-15);
  EXPECT_NEAR(std::norm(out.at({2, 0})), 0.5, 1e-15);
  EXPECT_NEAR(std::norm(out.at({0, 2})), 0.5, 1e-15);
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-14);
}

TEST(Oracle, BeamsplitterBlocksAreUnitary) {
  const double c = std::cos(0.4), s = std::sin(0.4);
  const Matrix2 t{{{Amplitude(c), Amplitude(0, s)}, {Amplitude(0, s), Amplitude(c)}}};
  const auto blocks = beamsplitter_blocks(t, 6);
  for (int n = 0; n <= 6; ++n) {
    const auto& u = blocks[static_cast<std::size_t>(n)];
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        Amplitude dot = 0.0;
        for (int k = 0; k <= n; ++k) dot += std::conj(u[k][a]) * u[k][b];
        EXPECT_NEAR(std::abs(dot - (a == b ? 1.0 : 0.0)), 0.0, 1e-13) << n << " " << a << " " << b;
      }
    }
  }
}

TEST(Oracle, PhaseShiftAndMarginal) {
  MultiModeState s({3, 2});
  s.at({2, 1}) = 1.0;
  const auto p = s.apply_phase(0, 0.5);
  EXPECT_NEAR(std::arg(p.at({2, 1})), 1.0, 1e-15);
  const auto marg = p.marginal(0, 1);
  EXPECT_NEAR(marg[2 * 2 + 1], 1.0, 1e-15);
  EXPECT_NEAR(p.mean_photons(0), 2.0, 1e-15);
}

TEST(Oracle, ProjectionGivesConditionalState) {
  MultiModeState s({2, 2});
  s.at({0, 1}) = 0.6;
  s.at({1, 0}) = Amplitude(0, 0.8);
  const auto c = s.project(0, 1);
  EXPECT_EQ(c.modes(), 1);
  EXPECT_NEAR(c.norm_squared(), 0.64, 1e-15);
}

TEST(Oracle, DetectorLossIsBinomialThinning) {
  ReadoutStatistics s{4, 1, {0.0, 0.0, 0.0, 1.0}};  // |3> on detector a
  const auto l = apply_detector_loss(s, 0.7);
  for (int k = 0; k <= 3; ++k) {
    const double binom = std::tgamma(4) / (std::tgamma(k + 1) * std::tgamma(4 - k));
    EXPECT_NEAR(l.at(k, 0), binom * std::pow(0.7, k) * std::pow(0.3, 3 - k), 1e-14);
  }
  EXPECT_NEAR(l.total(), 1.0, 1e-14);
  EXPECT_NEAR(l.moment(1, 0), 2.1, 1e-13);
}

TEST(Oracle, MemoryBoundEnforced) {
  try {
    MultiModeState({100, 100, 100}, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MemoryBoundExceeded);
  }
}

TEST(Oracle, SingleSceneFringeMatchesEngine) {
  const SingleMziConfig c{{0.3, 1, 0.0}, 2.0, 0.0, 0.9, 1.0};
  const auto quantum = states::passv(c.input, {std::nullopt, 1e-16});
  const auto st = oracle_interferometer(OracleSingleScene{quantum, std::sqrt(2.0), c.phi, c.eta});
  EXPECT_NEAR(st.total(), 1.0, 1e-12);
  const double o = st.moment(0, 1) - st.moment(1, 0);
  EXPECT_NEAR(o, single_mean_and_slope(c).first, 1e-10);
}

TEST(Oracle, QfiOfCoherentInput) {
  EXPECT_NEAR(oracle_qfi(FockState1(), std::polar(2.0, 0.3)), 8.0, 1e-9);
}

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "psqm/errors.hpp"
#include "psqm/experiments.hpp"

using namespace psqm;
namespace ex = psqm::experiments;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no psqm::Error raised";
  return ErrorKind::Singular;
}

std::string csv(const ex::SweepResult& r) {
  std::ostringstream os;
  ex::write_csv(r, os);
  return os.str();
}

const ex::Row& row(const ex::SweepResult& r, double x, int m, const std::string& metric) {
  for (const auto& row : r.rows) {
    if (row.swept_value == x && row.m == m && row.metric == metric) return row;
  }
  throw std::runtime_error("row not found");
}

}  // namespace

TEST(Config, ParsesFlatKeysAndSpacings) {
  const auto c = ex::parse_config(R"({"axis":"lambda","logspace":[-1,1,3],"m":[0,2],
      "metrics":["U_single"],"mu":10,"eta":0.9,"balanced":true,"precision_digits":40})");
  EXPECT_EQ(c.axis.name, "lambda");
  ASSERT_EQ(c.axis.values.size(), 3u);
  EXPECT_NEAR(c.axis.values[0], 0.1, 1e-15);
  EXPECT_NEAR(c.axis.values[2], 10.0, 1e-13);
  EXPECT_EQ(c.m_values, (std::vector<int>{0, 2}));
  EXPECT_TRUE(c.balanced);
  EXPECT_EQ(*c.precision_digits, 40u);
  const auto l = ex::parse_config(R"({"axis":"eta","linspace":[0.5,1,3],"metrics":["nrf"],"lambda":[0.1,2]})");
  EXPECT_EQ(l.axis.values, (std::vector<double>{0.5, 0.75, 1.0}));
  EXPECT_EQ(l.lambdas.size(), 2u);
}

TEST(Config, FieldLevelDiagnostics) {
  auto message = [](const std::string& text) {
    try {
      ex::parse_config(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ConfigInvalid);
      return std::string(e.what());
    }
    return std::string("accepted");
  };
  EXPECT_NE(message(R"({"axis":"lambda","values":[1],"metrics":["U_single"],"colour":1})").find("'colour'"),
            std::string::npos);
  EXPECT_NE(message(R"({"axis":"warp","values":[1],"metrics":["U_single"]})").find("'axis'"), std::string::npos);
  EXPECT_NE(message(R"({"axis":"lambda","values":[1],"metrics":["nope"]})").find("'metrics'"), std::string::npos);
  EXPECT_NE(message(R"({"axis":"eta","values":[1.5],"metrics":["nrf"]})").find("'values'"), std::string::npos);
  EXPECT_NE(message(R"({"axis":"lambda","values":[1],"metrics":["nrf"],"mu":-1})").find("'mu'"), std::string::npos);
  EXPECT_NE(message(R"({"axis":"lambda","values":[1],"logspace":[0,1,2],"metrics":["nrf"]})").find("'values'"),
            std::string::npos);
  EXPECT_NE(message(R"({"axis":"lambda","values":[1],"metrics":["nrf"],"precision_digits":5})")
                .find("'precision_digits'"),
            std::string::npos);
  EXPECT_NE(message("{not json").find("malformed"), std::string::npos);
  EXPECT_NE(message(R"({"preset":"fig99"})").find("'preset'"), std::string::npos);
}

TEST(Config, PresetCanBeOverridden) {
  const auto c = ex::parse_config(R"({"preset":"fig10b","values":[0.8]})");
  EXPECT_EQ(c.axis.name, "eta");
  EXPECT_EQ(c.axis.values, std::vector<double>{0.8});
  EXPECT_TRUE(c.balanced);
  EXPECT_EQ(c.mu, 1e12);
}

TEST(Presets, AllNamesResolve) {
  const auto names = ex::preset_names();
  EXPECT_EQ(names.size(), 16u);
  for (const auto& n : names) EXPECT_NO_THROW(ex::validate(ex::preset_config(n))) << n;
  EXPECT_EQ(kind_of([] { ex::preset_config("fig42"); }), ErrorKind::UnknownPreset);
}

TEST(Presets, CaptionParameters) {
  const auto f9a = ex::preset_config("fig9a");
  EXPECT_EQ(f9a.lambdas, std::vector<double>{2.0});
  EXPECT_EQ(f9a.eta, 0.98);
  const auto f9c = ex::preset_config("fig9c");
  EXPECT_EQ(f9c.eta, 0.96);
  EXPECT_TRUE(f9c.balanced);
  const auto f8 = ex::preset_config("fig8");
  EXPECT_EQ(f8.mu, 1e6);
  EXPECT_EQ(f8.eta, 1.0);
  const auto f1 = ex::preset_config("fig1b");
  EXPECT_EQ(f1.mu, 100);
  EXPECT_EQ(f1.eta, 0.98);
  EXPECT_EQ(f1.psi, 0.0);
  const auto f10 = ex::preset_config("fig10a");
  EXPECT_EQ(f10.phi, 1e-8);
}

TEST(Sweep, ZeroLambdaGivesShotNoise) {
  const auto r = ex::run_sweep(ex::parse_config(R"({"axis":"lambda","values":[0],"metrics":["U_single","U_snl"],"mu":100})"));
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_NEAR(r.rows[0].value, 0.1, 1e-12);
  EXPECT_NEAR(r.rows[1].value, 0.1, 1e-15);
}

TEST(Sweep, MeanPhotonsNondecreasingAlongMAxis) {
  const auto r = ex::run_sweep(
      ex::parse_config(R"({"axis":"m","values":[0,1,2,3],"metrics":["mean_photons_spatsv"],"lambda":0.6})"));
  ASSERT_EQ(r.rows.size(), 4u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].m, static_cast<int>(i));
    EXPECT_GE(r.rows[i].value, r.rows[i - 1].value);
  }
}

TEST(Sweep, NrfBoundaryBehaviour) {
  const auto r = ex::run_sweep(
      ex::parse_config(R"({"axis":"eta","values":[0,1],"metrics":["nrf"],"phi":0,"mu":0,"lambda":0.5})"));
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].flag, ex::Flag::Singular);
  EXPECT_EQ(r.rows[1].flag, ex::Flag::Ok);
  EXPECT_NEAR(r.rows[1].value, 0.0, 1e-12);
}

TEST(Sweep, RowCountAndOrdering) {
  const auto r = ex::run_sweep(ex::parse_config(
      R"({"axis":"lambda","values":[0.1,0.2,0.4],"m":[0,1],"metrics":["mean_photons_passv","quadrature_variance_Y"],"threads":3})"));
  ASSERT_EQ(r.rows.size(), 3u * 2u * 2u);
  EXPECT_EQ(r.rows[0].swept_value, 0.1);
  EXPECT_EQ(r.rows[0].m, 0);
  EXPECT_EQ(r.rows[0].metric, "mean_photons_passv");
  EXPECT_EQ(r.rows[1].metric, "quadrature_variance_Y");
  EXPECT_EQ(r.rows[2].m, 1);
  EXPECT_EQ(r.rows[4].swept_value, 0.2);
}

TEST(Sweep, OutputIsDeterministicAcrossThreadCounts) {
  const std::string base =
      R"({"axis":"lambda","values":[0.05,0.5,2],"m":[0,1,2],"metrics":["U_single","qfi","mandel_q"],"mu":50,"eta":0.9,)";
  const auto a = csv(ex::run_sweep(ex::parse_config(base + R"("threads":1})")));
  const auto b = csv(ex::run_sweep(ex::parse_config(base + R"("threads":4})")));
  const auto c = csv(ex::run_sweep(ex::parse_config(base + R"("threads":4})")));
  EXPECT_EQ(a, b);
  EXPECT_EQ(b, c);
}

TEST(Sweep, LambdaListLabelsMetrics) {
  const auto r = ex::run_sweep(ex::parse_config(
      R"({"axis":"one_minus_tau","values":[1],"m":[0],"metrics":["nrf"],"lambda":[0.05,2],"mu":1e6,"psi":1.5707963267948966})"));
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].metric, "nrf[lambda=0.050000000000000003]");
  EXPECT_EQ(r.rows[1].metric, "nrf[lambda=2]");
  for (const auto& row : r.rows) EXPECT_NEAR(row.value, 1.0, 1e-9);
}

TEST(Sweep, BalancedOddOrderBelowInfimumIsFlagged) {
  const auto r = ex::run_sweep(
      ex::parse_config(R"({"axis":"lambda","values":[0.5],"m":[1],"metrics":["U_single"],"mu":100,"balanced":true})"));
  EXPECT_EQ(r.rows[0].flag, ex::Flag::OutOfRange);
  EXPECT_NE(csv(r).find(",1,U_single,,out_of_range"), std::string::npos);
}

TEST(Sweep, Fig10bReductionAtHighLoss) {
  const auto r = ex::run_sweep(ex::parse_config(R"({"preset":"fig10b","values":[0.8]})"));
  const double u0 = row(r, 0.8, 0, "U_correlated").value;
  const double u3 = row(r, 0.8, 3, "U_correlated").value;
  const double reduction = 1.0 - u3 / u0;
  EXPECT_GE(reduction, 0.20);
  EXPECT_LE(reduction, 0.35);
}

TEST(Sweep, Fig3bBalancedQfiDominatedBySqueezedVacuum) {
  const auto r = ex::run_sweep(ex::parse_config(R"({"preset":"fig3b","values":[2,10,50]})"));
  for (double x : {2.0, 10.0, 50.0}) {
    const double f0 = row(r, x, 0, "qfi").value;
    for (int m = 1; m <= 4; ++m) {
      const auto& rw = row(r, x, m, "qfi");
      ASSERT_EQ(rw.flag, ex::Flag::Ok);
      EXPECT_GE(f0, rw.value) << x << " " << m;
    }
  }
}

TEST(Csv, SchemaAndMetadata) {
  ex::SweepResult r;
  r.metadata = {{"preset", "t"}};
  r.rows.push_back({0.5, 1, "x", 0.25, ex::Flag::Ok, ""});
  r.rows.push_back({0.5, 1, "y", 0.0, ex::Flag::Precision, "why"});
  EXPECT_EQ(csv(r), "# preset: t\nswept_param,m,metric,value,flag\n0.5,1,x,0.25,ok\n0.5,1,y,,precision\n");
  EXPECT_EQ(ex::format_value(0.1), "0.10000000000000001");
  EXPECT_EQ(ex::format_value(-0.0), "0");
}

TEST(OracleCompare, DualPathAgreementLossless) {
  const auto rep = ex::oracle_compare(ex::parse_oracle_config(R"({"scene":"correlated","mu":2,"lambda":0.3,"m":1,"eta":1})"));
  EXPECT_TRUE(rep.passed()) << rep.worst();
  EXPECT_EQ(rep.rows.size(), 14u);
}

TEST(OracleCompare, ExactZerosWithoutLight) {
  const auto rep = ex::oracle_compare(ex::parse_oracle_config(R"({"scene":"single","mu":0,"lambda":0,"m":0,"phi":0.37})"));
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.engine, 0.0) << r.quantity;
    EXPECT_EQ(r.oracle, 0.0) << r.quantity;
  }
  EXPECT_TRUE(rep.passed());
}

TEST(OracleCompare, DualPathAgreementWithLoss) {
  const auto rep = ex::oracle_compare(
      ex::parse_oracle_config(R"({"scene":"correlated","mu":2,"lambda":0.3,"m":2,"eta":0.8})"));
  EXPECT_TRUE(rep.passed()) << rep.worst();
}

TEST(OracleCompare, ConfigBounds) {
  EXPECT_EQ(kind_of([] { ex::parse_oracle_config(R"({"mu":20})"); }), ErrorKind::ConfigInvalid);
  EXPECT_EQ(kind_of([] { ex::parse_oracle_config(R"({"scene":"triple"})"); }), ErrorKind::ConfigInvalid);
  EXPECT_EQ(kind_of([] { ex::oracle_compare(ex::parse_oracle_config(R"({"max_entries":10,"scene":"single"})")); }),
            ErrorKind::MemoryBoundExceeded);
}

TEST(OracleCompare, RelativeError) {
  EXPECT_EQ(ex::relative_error(0.0, 0.0), 0.0);
  EXPECT_EQ(ex::relative_error(1e-30, 0.0), 1.0);
  EXPECT_NEAR(ex::relative_error(1.0, 1.0 + 1e-9), 1e-9, 1e-15);
}

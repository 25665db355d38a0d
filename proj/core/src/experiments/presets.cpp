#include <cmath>
#include <functional>
#include <map>

#include "psqm/errors.hpp"
#include "psqm/experiments.hpp"

namespace psqm::experiments {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (n - 1)));
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

SweepConfig base(std::string name, Axis axis, std::vector<int> m, std::vector<std::string> metrics) {
  SweepConfig c;
  c.name = std::move(name);
  c.axis = std::move(axis);
  c.m_values = std::move(m);
  c.metrics = std::move(metrics);
  return c;
}

const std::vector<int> kM04{0, 1, 2, 3, 4};
const std::vector<int> kM03{0, 1, 2, 3};

// Fig. 1 and Fig. 3 lambda grid
Axis lambda_grid() { return {"lambda", logspace(-3, 2, 51)}; }

SweepConfig fig1b(std::string name, bool balanced) {
  auto c = base(std::move(name), lambda_grid(), kM04, {"U_single", "U_snl"});
  c.mu = 100;
  c.eta = 0.98;
  c.psi = 0;
  c.phi = kHalfPi;
  c.balanced = balanced;
  return c;
}

SweepConfig fig3(std::string name, bool balanced) {
  auto c = base(std::move(name), lambda_grid(), kM04, {"qfi", "qfi_classical"});
  c.mu = 100;
  c.balanced = balanced;
  return c;
}

SweepConfig fig9(std::string name, double lambda, double eta, bool balanced) {
  auto c = base(std::move(name), {"phi", logspace(-10, -3, 29)}, kM03, {"U_correlated", "U_double_squeezing"});
  c.mu = 1e12;
  c.lambdas = {lambda};
  c.eta = eta;
  c.psi = kHalfPi;
  c.balanced = balanced;
  return c;
}

SweepConfig fig10(std::string name, bool balanced) {
  auto c = base(std::move(name), {"eta", linspace(0.5, 1.0, 26)}, kM03, {"U_correlated"});
  c.mu = 1e12;
  c.lambdas = {2.0};
  c.phi = 1e-8;
  c.psi = kHalfPi;
  c.balanced = balanced;
  return c;
}

const std::map<std::string, std::function<SweepConfig()>>& registry() {
  static const std::map<std::string, std::function<SweepConfig()>> presets{
      {"fig1a", [] { return base("fig1a", lambda_grid(), kM04, {"quadrature_variance_Y"}); }},
      {"fig1b", [] { return fig1b("fig1b", false); }},
      {"fig1c", [] { return fig1b("fig1c", true); }},
      {"fig_anyangle",
       [] {
         // off-optimal working point read as pi/2 - 1
         auto c = base("fig_anyangle", {"lambda", logspace(-1, 4, 26)}, kM04, {"U_single", "U_snl"});
         c.mu = 1e4;
         c.eta = 0.98;
         c.phi = kHalfPi - 1.0;
         c.balanced = true;
         return c;
       }},
      {"fig3a", [] { return fig3("fig3a", false); }},
      {"fig3b", [] { return fig3("fig3b", true); }},
      {"fig5a",
       [] {
         return base("fig5a", lambda_grid(), kM03, {"seed_quadrature_difference", "tsv_quadrature_difference"});
       }},
      {"fig5b", [] { return base("fig5b", lambda_grid(), kM03, {"spatsv_quadrature_difference"}); }},
      {"fig6",
       [] {
         auto c = base("fig6", {"n", linspace(0, 20, 21)}, {0, 1, 3}, {"joint_probability_diag"});
         c.lambdas = {0.6};
         return c;
       }},
      {"fig_mandel",
       [] {
         auto c = base("fig_mandel", lambda_grid(), kM03, {"mandel_q"});
         c.eta = 0.98;
         return c;
       }},
      {"fig8",
       [] {
         auto c = base("fig8", {"one_minus_tau", logspace(-6, 0, 61)}, {0, 1, 2},
                       {"nrf", "nrf_asymptotic", "nrf_large_lambda"});
         c.lambdas = {0.05, 2.0};
         c.eta = 1.0;
         c.psi = kHalfPi;
         c.mu = 1e6;
         return c;
       }},
      {"fig9a", [] { return fig9("fig9a", 2.0, 0.98, false); }},
      {"fig9b", [] { return fig9("fig9b", 0.05, 0.98, false); }},
      {"fig9c", [] { return fig9("fig9c", 2.0, 0.96, true); }},
      {"fig10a", [] { return fig10("fig10a", false); }},
      {"fig10b", [] { return fig10("fig10b", true); }},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

SweepConfig preset_config(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) raise(ErrorKind::UnknownPreset, "no preset named '" + name + "'");
  return it->second();
}

SweepResult run_preset(const std::string& name) { return run_sweep(preset_config(name)); }

}  // namespace psqm::experiments

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "psqm/errors.hpp"
#include "psqm/experiments.hpp"
#include "psqm/numeric.hpp"

namespace ex = psqm::experiments;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalFailure = 2;

int emit(const ex::SweepResult& result, const std::string& path) {
  if (path.empty() || path == "-") {
    ex::write_csv(result, std::cout);
    return kOk;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "psqm: cannot open '" << path << "' for writing\n";
    return kConfigError;
  }
  ex::write_csv(result, out);
  std::size_t flagged = 0;
  for (const auto& r : result.rows) flagged += r.flag != ex::Flag::Ok;
  std::cerr << "psqm: wrote " << result.rows.size() << " rows (" << flagged << " flagged) to " << path << '\n';
  return out ? kOk : kNumericalFailure;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const psqm::Error& e) {
    std::cerr << "psqm: " << e.what() << '\n';
    const auto k = e.kind();
    return k == psqm::ErrorKind::ConfigInvalid || k == psqm::ErrorKind::UnknownPreset ? kConfigError
                                                                                      : kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "psqm: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-subtracted squeezed light in interferometry: figure presets, sweeps, oracle checks"};
  app.require_subcommand(1);

  std::string preset_name, out_path, config_path;

  auto* preset = app.add_subcommand("preset", "run a figure preset and write its CSV");
  preset->add_option("name", preset_name, "preset name (see `psqm list`)")->required();
  preset->add_option("-o,--out", out_path, "output CSV path, '-' for stdout");

  auto* sweep = app.add_subcommand("sweep", "run a sweep described by a JSON config");
  sweep->add_option("-c,--config", config_path, "config file")->required();
  sweep->add_option("-o,--out", out_path, "output CSV path; overrides the config's output field");

  auto* oracle = app.add_subcommand("oracle-compare", "compare engine moments with the Fock-space oracle");
  oracle->add_option("-c,--config", config_path, "config file")->required();

  auto* list = app.add_subcommand("list", "list presets and metrics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  if (*list) {
    std::cout << "presets:\n";
    for (const auto& n : ex::preset_names()) std::cout << "  " << n << '\n';
    std::cout << "metrics:\n";
    for (const auto& [n, d] : ex::metric_catalog()) std::cout << "  " << n << ": " << d << '\n';
    return kOk;
  }
  if (*preset) {
    return guarded([&] {
      auto cfg = ex::preset_config(preset_name);
      return emit(ex::run_sweep(cfg), out_path);
    });
  }
  if (*sweep) {
    return guarded([&] {
      const auto cfg = ex::load_config(config_path);
      return emit(ex::run_sweep(cfg), out_path.empty() ? cfg.output : out_path);
    });
  }
  return guarded([&] {
    const auto cfg = ex::load_oracle_config(config_path);
    psqm::set_working_digits(ex::resolve_digits(std::nullopt));
    const auto report = ex::oracle_compare(cfg);
    ex::write_report(report, std::cout);
    return report.passed() ? kOk : kNumericalFailure;
  });
}

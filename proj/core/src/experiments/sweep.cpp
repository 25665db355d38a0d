#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "psqm/errors.hpp"
#include "psqm/experiments.hpp"
#include "psqm/metrology.hpp"
#include "psqm/moments.hpp"
#include "psqm/states.hpp"

#ifndef PSQM_VERSION_STRING
#define PSQM_VERSION_STRING "unknown"
#endif

namespace psqm::experiments {

namespace {

using states::StateKind;

constexpr double kStateTail = 1e-16;
constexpr double kHalfPi = 1.5707963267948966;

struct Point {
  double lambda;  // nominal value: the per-m balanced lambda is derived from it
  int m;
  int n;
  double mu, psi, phi, eta, chi;
  bool balanced;
  std::optional<int> cutoff;

  double lambda_for(StateKind kind) const {
    return balanced ? states::balance_energy(lambda, m, kind) : lambda;
  }
  fock::CutoffPolicy policy() const { return {cutoff, kStateTail}; }
  double tau() const {
    const double c = std::cos(phi / 2.0);
    return c * c;
  }
  SingleMziConfig single() const { return {{lambda_for(StateKind::SingleMode), m, chi}, mu, psi, phi, eta}; }
  CorrelatedConfig correlated() const { return {{lambda_for(StateKind::TwoMode), m, chi}, mu, psi, phi, eta}; }
};

MomentTable passv_table(const Point& p) {
  return table_from_state(states::passv({p.lambda_for(StateKind::SingleMode), p.m, p.chi}, p.policy()), 4);
}

MomentTable spatsv_table(const Point& p, int m) {
  const double l = p.lambda_for(StateKind::TwoMode);
  return table_from_state(states::spatsv({l, m, p.chi}, p.policy()), 4);
}

double passv_photons(const Point& p) {
  return states::passv_mean_photons(p.lambda_for(StateKind::SingleMode), p.m);
}

struct Metric {
  const char* name;
  const char* description;
  std::function<double(const Point&)> eval;
};

const std::vector<Metric>& metrics() {
  static const std::vector<Metric> all{
      {"quadrature_variance_Y", "Var(Y) of the PASSV state; vacuum 0.5",
       [](const Point& p) { return quadrature_variance(passv_table(p), kHalfPi); }},
      {"U_single", "phase uncertainty of the single interferometer read-out N_d - N_c",
       [](const Point& p) { return single_phase_uncertainty(p.single()); }},
      {"U_snl", "shot-noise limit 1/sqrt(eta (mu + N_m)) at the same total energy",
       [](const Point& p) {
         const double n = p.eta * (p.mu + passv_photons(p));
         if (!(n > 0.0)) raise(ErrorKind::ZeroMeanPhoton, "no detected photons");
         return 1.0 / std::sqrt(n);
       }},
      {"qfi", "quantum Fisher information of PASSV plus coherent state",
       [](const Point& p) { return qfi(p.single()); }},
      {"qfi_classical", "coherent-only Fisher information 2 (lambda + mu)",
       [](const Point& p) { return 2.0 * (p.lambda + p.mu); }},
      {"cramer_rao_bound", "1/sqrt(F_Q)", [](const Point& p) { return cramer_rao_bound(qfi(p.single())); }},
      {"mean_photons_passv", "mean photon number of the PASSV state", [](const Point& p) { return passv_photons(p); }},
      {"lambda0", "squeezing energy giving a PASSV of lambda photons",
       [](const Point& p) { return states::balance_energy(p.lambda, p.m, StateKind::SingleMode); }},
      {"seed_quadrature_difference", "Var(X1 - X2)/2 at theta = chi of the normalized seed superposition",
       [](const Point& p) {
         const double l = p.lambda_for(StateKind::TwoMode);
         return quadrature_difference_variance(table_from_state(states::spatsv_seed({l, p.m, p.chi}).normalized(), 4),
                                               p.chi);
       }},
      {"tsv_quadrature_difference", "Var(X1 - X2)/2 of the two-mode squeezed vacuum (m ignored)",
       [](const Point& p) { return quadrature_difference_variance(spatsv_table(p, 0), p.chi); }},
      {"spatsv_quadrature_difference", "Var(X1 - X2)/2 at theta = chi of the SPATSV state",
       [](const Point& p) { return quadrature_difference_variance(spatsv_table(p, p.m), p.chi); }},
      {"joint_probability_diag", "P(n, n) of the SPATSV state, n from the swept axis",
       [](const Point& p) {
         const auto d = joint_photon_distribution(
             states::spatsv({p.lambda_for(StateKind::TwoMode), p.m, p.chi}, p.policy()));
         return p.n < d.dim ? d.at(p.n, p.n) : 0.0;
       }},
      {"mandel_q", "Mandel Q of one SPATSV mode after detection efficiency eta",
       [](const Point& p) { return mandel_q(apply_loss(spatsv_table(p, p.m), p.eta)); }},
      {"mean_photons_spatsv", "mean photon number per mode of the SPATSV state",
       [](const Point& p) { return states::spatsv_mean_photons(p.lambda_for(StateKind::TwoMode), p.m); }},
      {"lambda0_two_mode", "squeezing energy giving a SPATSV of lambda photons per mode",
       [](const Point& p) { return states::balance_energy(p.lambda, p.m, StateKind::TwoMode); }},
      {"nrf", "noise reduction factor Var(N5 - N7)/(<N5> + <N7>)", [](const Point& p) { return nrf(p.correlated()); }},
      {"nrf_asymptotic", "small-lambda closed form of the noise reduction factor (m <= 2)",
       [](const Point& p) { return nrf_asymptotic(p.m, p.tau(), p.lambda_for(StateKind::TwoMode)); }},
      {"nrf_large_lambda", "large-lambda law 1 - tau + tau/(4 lambda)",
       [](const Point& p) {
         const double l = p.lambda_for(StateKind::TwoMode);
         if (!(l > 0.0)) raise(ErrorKind::OutOfRange, "large-lambda law needs lambda > 0");
         return 1.0 - p.tau() + p.tau() / (4.0 * l);
       }},
      {"U_correlated", "normalized uncertainty of the correlated scheme",
       [](const Point& p) { return correlated_uncertainty(p.correlated()); }},
      {"U_double_squeezing", "normalized uncertainty with two single-mode squeezed vacua of lambda photons (m ignored)",
       [](const Point& p) {
         CorrelatedConfig c = p.correlated();
         c.input.lambda = p.lambda;
         return correlated_uncertainty_double_squeezing(c);
       }},
      {"U_correlated_asymptotic_low_lambda", "bright-fringe closed form, lambda << 1 (m <= 3)",
       [](const Point& p) {
         return correlated_uncertainty_asymptotic(AsymptoticRegime::LowLambdaBright, p.m, p.tau(), p.eta,
                                                  p.lambda_for(StateKind::TwoMode));
       }},
      {"U_correlated_asymptotic_high_lambda", "bright-fringe closed form, lambda >> 1 (m <= 3)",
       [](const Point& p) {
         return correlated_uncertainty_asymptotic(AsymptoticRegime::HighLambdaBright, p.m, p.tau(), p.eta,
                                                  p.lambda_for(StateKind::TwoMode));
       }},
      {"U_dark_fringe_low_lambda", "dark-fringe plateau sqrt 2 sqrt((1 - eta)/eta)",
       [](const Point& p) {
         return correlated_uncertainty_asymptotic(AsymptoticRegime::DarkFringeLowLambda, p.m, p.tau(), p.eta,
                                                  p.lambda);
       }},
      {"U_dark_fringe_high_lambda", "dark-fringe high-lambda limit 2 sqrt(k_m) (1 - eta) (m <= 3)",
       [](const Point& p) {
         return correlated_uncertainty_asymptotic(AsymptoticRegime::DarkFringeHighLambda, p.m, p.tau(), p.eta,
                                                  p.lambda);
       }},
  };
  return all;
}

const Metric& find_metric(const std::string& name) {
  for (const Metric& m : metrics()) {
    if (name == m.name) return m;
  }
  raise(ErrorKind::ConfigInvalid, "field 'metrics': unknown metric '" + name + "'");
}

Flag classify(ErrorKind k) {
  switch (k) {
    case ErrorKind::Singular:
    case ErrorKind::ZeroMeanPhoton:
    case ErrorKind::NonPositiveQfi:
      return Flag::Singular;
    case ErrorKind::OutOfRange:
    case ErrorKind::NullState:
    case ErrorKind::UnsupportedOrder:
      return Flag::OutOfRange;
    case ErrorKind::PrecisionInsufficient:
      return Flag::Precision;
    default:
      return Flag::Ok;
  }
}

struct Task {
  std::size_t axis_index;
  int m;
  std::size_t metric_index;
  std::size_t lambda_index;
};

Point make_point(const SweepConfig& cfg, double axis_value, int m, double lambda) {
  Point p{lambda, m, 0, cfg.mu, cfg.psi, cfg.phi, cfg.eta, cfg.chi, cfg.balanced, cfg.cutoff};
  const std::string& a = cfg.axis.name;
  if (a == "lambda") p.lambda = axis_value;
  else if (a == "mu") p.mu = axis_value;
  else if (a == "phi") p.phi = axis_value;
  else if (a == "eta") p.eta = axis_value;
  else if (a == "psi") p.psi = axis_value;
  else if (a == "one_minus_tau") p.phi = phi_from_tau(1.0 - axis_value);
  else if (a == "m") p.m = static_cast<int>(axis_value);
  else if (a == "n") p.n = static_cast<int>(axis_value);
  return p;
}

std::string label(const SweepConfig& cfg, const std::string& metric, std::size_t lambda_index) {
  if (cfg.lambdas.size() <= 1 || cfg.axis.name == "lambda") return metric;
  return metric + "[lambda=" + format_value(cfg.lambdas[lambda_index]) + "]";
}

std::string describe_lambdas(const std::vector<double>& ls) {
  std::string s;
  for (std::size_t i = 0; i < ls.size(); ++i) s += (i ? " " : "") + format_value(ls[i]);
  return s;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& metric_catalog() {
  static const auto catalog = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Metric& m : metrics()) out.emplace_back(m.name, m.description);
    return out;
  }();
  return catalog;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const unsigned digits = resolve_digits(cfg.precision_digits);
  // process-wide; must happen before any worker starts
  set_working_digits(digits);

  std::vector<const Metric*> chosen;
  for (const auto& name : cfg.metrics) chosen.push_back(&find_metric(name));

  // an m axis replaces the m list
  const bool m_axis = cfg.axis.name == "m";
  const std::vector<double> lambdas = cfg.axis.name == "lambda" ? std::vector<double>{0.0} : cfg.lambdas;

  std::vector<Task> tasks;
  for (std::size_t ai = 0; ai < cfg.axis.values.size(); ++ai) {
    const std::vector<int> ms = m_axis ? std::vector<int>{static_cast<int>(cfg.axis.values[ai])} : cfg.m_values;
    for (int m : ms) {
      for (std::size_t mi = 0; mi < chosen.size(); ++mi) {
        for (std::size_t li = 0; li < lambdas.size(); ++li) tasks.push_back({ai, m, mi, li});
      }
    }
  }

  SweepResult result;
  result.swept_param = cfg.axis.name;
  result.rows.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      Row& row = result.rows[i];
      const double axis_value = cfg.axis.values[t.axis_index];
      row.swept_value = axis_value;
      row.m = t.m;
      row.metric = label(cfg, chosen[t.metric_index]->name, t.lambda_index);
      try {
        const Point p = make_point(cfg, axis_value, t.m, cfg.axis.name == "lambda" ? axis_value : lambdas[t.lambda_index]);
        const double v = chosen[t.metric_index]->eval(p);
        if (std::isfinite(v)) {
          row.value = v;
        } else {
          row.flag = Flag::Singular;
          row.detail = "non-finite value";
        }
      } catch (const Error& e) {
        const Flag f = classify(e.kind());
        if (f == Flag::Ok) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed = true;
          return;
        }
        row.flag = f;
        row.detail = e.what();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, std::max<std::size_t>(1, tasks.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  result.metadata = {
      {"preset", cfg.name},
      {"version", PSQM_VERSION_STRING},
      {"precision_digits", std::to_string(digits)},
      {"swept_param", cfg.axis.name},
      {"lambda", cfg.axis.name == "lambda" ? std::string("swept") : describe_lambdas(cfg.lambdas)},
      {"mu", format_value(cfg.mu)},
      {"psi", format_value(cfg.psi)},
      {"phi", format_value(cfg.phi)},
      {"eta", format_value(cfg.eta)},
      {"chi", format_value(cfg.chi)},
      {"balanced", cfg.balanced ? "true" : "false"},
      {"cutoff", cfg.cutoff ? std::to_string(*cfg.cutoff) : std::string("auto")},
  };
  return result;
}

}  // namespace psqm::experiments

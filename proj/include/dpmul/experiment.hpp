#pragma once

// Monte Carlo harness for detection-rate and MSE curves over a grid of scale
// indices n.
//
// Every trial owns a generator derived from (seed, n index, trial index).
// Within a trial the inputs, noise, fault positions and the standard-normal
// adversary draws are shared by all scenarios, which differ only in the
// adversary variance. Results are reduced in trial order, so the output does
// not depend on the number of worker threads.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dpmul/channel.hpp"
#include "dpmul/decoder.hpp"
#include "dpmul/encoder.hpp"
#include "dpmul/errors.hpp"
#include "dpmul/noise.hpp"
#include "dpmul/random.hpp"
#include "dpmul/scheme.hpp"
#include "dpmul/theory.hpp"

namespace dpmul {

enum class InputLaw { gaussian, uniform };

struct ExperimentConfig {
  SchemeParams scheme;
  std::vector<std::uint64_t> n_grid{10, 100, 1000, 10000, 100000, 1000000};
  std::size_t trials = 1000;
  std::vector<double> sigma_e2_list{1.0, 5.0};
  InputLaw input_law = InputLaw::gaussian;
  std::uint64_t seed = 1;
  std::string output_path;
  // Replaces the per-trial random fault plan when set.
  std::optional<FaultPlan> fixed_plan;
  // 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

struct TrialSummary {
  std::uint64_t n = 0;
  std::string scenario;
  std::optional<double> sigma_e2;  // nullopt: no adversaries
  std::size_t trials = 0;
  double detection_rate = 1.0;
  double detection_stderr = 0.0;
  double empirical_mse = 0.0;
  double mse_stderr = 0.0;
  double bound = 0.0;
  std::uint64_t seed = 0;
  // Which standard error the CSV "stderr" column carries.
  bool stderr_is_detection = false;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string scenario_label(const std::optional<double>& sigma_e2) {
  return sigma_e2 ? "sigma_e2=" + format_double(*sigma_e2) : "no_adversary";
}

struct TrialOutcome {
  bool detected = true;
  double sq_error = 0.0;
};

inline double draw_input(InputLaw law, double eta, Rng& rng) {
  if (law == InputLaw::uniform) {
    const double half = std::sqrt(3.0 * eta);
    return -half + 2.0 * half * uniform_open(rng);
  }
  std::normal_distribution<double> gauss(0.0, std::sqrt(eta));
  return gauss(rng);
}

inline bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  for (std::size_t x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return false;
  }
  return true;
}

// One trial evaluated under each scenario.
inline std::vector<TrialOutcome> run_trial(const ExperimentConfig& cfg, const SchemeParams& p,
                                           std::size_t n_index, std::size_t trial,
                                           const std::vector<std::optional<double>>& scenarios) {
  Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(n_index), static_cast<std::uint64_t>(trial)});
  const double a = draw_input(cfg.input_law, p.eta, rng);
  const double b = draw_input(cfg.input_law, p.eta, rng);
  const NoiseDraw noise = draw_noise(p, rng);
  const std::vector<double> products = node_products(encode_shares(a, b, noise, p));
  FaultPlan base = cfg.fixed_plan ? *cfg.fixed_plan : sample_fault_plan(p, 0.0, rng);

  std::vector<TrialOutcome> out;
  out.reserve(scenarios.size());
  for (const auto& s2 : scenarios) {
    FaultPlan plan = base;
    if (!s2) {
      plan.adversarial.clear();
      plan.corruption = GaussianCorruption{0.0};
    } else if (std::holds_alternative<GaussianCorruption>(plan.corruption)) {
      plan.corruption = GaussianCorruption{*s2};
    }
    Rng channel_rng = rng;
    const ChannelOutput ch = apply_channel(products, plan, p, channel_rng);
    const DecodeReport rep = decode(ch.word, p);
    TrialOutcome o;
    o.detected = disjoint(rep.kept, ch.truth.adversarial);
    const double err = rep.estimate - a * b;
    o.sq_error = err * err;
    out.push_back(o);
  }
  return out;
}

inline std::size_t worker_count(const ExperimentConfig& cfg) {
  std::size_t w = cfg.threads;
  if (w == 0) w = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::min(w, std::max<std::size_t>(1, cfg.trials));
}

inline std::vector<TrialSummary> run_grid(const ExperimentConfig& cfg,
                                          const std::vector<std::optional<double>>& scenarios,
                                          bool detection_headline) {
  std::vector<TrialSummary> result;
  const double bound = lmmse_mse(cfg.scheme.eta, snr_a_limit(cfg.scheme.eta, cfg.scheme.sigma));
  const std::size_t workers = worker_count(cfg);

  for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
    SchemeParams p = cfg.scheme;
    p.scale_index = cfg.n_grid[ni];
    std::vector<std::vector<TrialOutcome>> outcomes(cfg.trials);

    auto work = [&](std::size_t w) {
      for (std::size_t k = w; k < cfg.trials; k += workers) outcomes[k] = run_trial(cfg, p, ni, k, scenarios);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    const double trials = static_cast<double>(cfg.trials);
    for (std::size_t si = 0; si < scenarios.size(); ++si) {
      double hits = 0.0;
      double sum = 0.0;
      double sum_sq = 0.0;
      for (const auto& row : outcomes) {
        hits += row[si].detected ? 1.0 : 0.0;
        sum += row[si].sq_error;
        sum_sq += row[si].sq_error * row[si].sq_error;
      }
      TrialSummary s;
      s.n = p.scale_index;
      s.sigma_e2 = scenarios[si];
      s.scenario = scenario_label(scenarios[si]);
      s.trials = cfg.trials;
      s.detection_rate = hits / trials;
      s.detection_stderr = std::sqrt(s.detection_rate * (1.0 - s.detection_rate) / trials);
      s.empirical_mse = sum / trials;
      const double var = cfg.trials > 1
                             ? std::max(0.0, (sum_sq - sum * sum / trials) / (trials - 1.0))
                             : 0.0;
      s.mse_stderr = std::sqrt(var / trials);
      s.bound = bound;
      s.seed = cfg.seed;
      s.stderr_is_detection = detection_headline;
      result.push_back(std::move(s));
    }
  }
  return result;
}

}  // namespace detail

// Violations that must be fixed before any trial runs.
inline std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> v = validate_params(cfg.scheme);
  if (cfg.trials < 1) v.emplace_back("trials >= 1");
  if (cfg.n_grid.empty()) v.emplace_back("n_grid nonempty");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < 1) v.emplace_back("n_grid entries >= 1");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) v.emplace_back("n_grid strictly ascending");
  }
  for (double s : cfg.sigma_e2_list) {
    if (!(s >= 0.0)) v.emplace_back("sigma_e2 >= 0");
  }
  if (cfg.scheme.max_erasures + cfg.scheme.max_adversaries > cfg.scheme.num_nodes) {
    v.emplace_back("E + A <= N");
  }
  if (cfg.fixed_plan) {
    try {
      validate_plan(*cfg.fixed_plan, cfg.scheme.num_nodes, cfg.scheme.max_erasures,
                    cfg.scheme.max_adversaries);
    } catch (const InvalidPlan& e) {
      v.emplace_back(e.what());
    }
  }
  return v;
}

inline void require_valid(const ExperimentConfig& cfg) {
  const auto v = validate_config(cfg);
  if (v.empty()) return;
  std::string msg = "invalid experiment configuration:";
  for (const auto& s : v) msg += " [" + s + "]";
  throw InvalidParameter(msg);
}

// One summary per (n, adversary variance). A trial counts as a successful
// detection when no adversarial node is among the kept T+1.
inline std::vector<TrialSummary> run_detection_experiment(const ExperimentConfig& cfg) {
  require_valid(cfg);
  std::vector<std::optional<double>> scenarios(cfg.sigma_e2_list.begin(), cfg.sigma_e2_list.end());
  return detail::run_grid(cfg, scenarios, true);
}

// One summary per (n, scenario) with scenarios: no adversaries, then each
// adversary variance.
inline std::vector<TrialSummary> run_mse_experiment(const ExperimentConfig& cfg) {
  require_valid(cfg);
  std::vector<std::optional<double>> scenarios{std::nullopt};
  scenarios.insert(scenarios.end(), cfg.sigma_e2_list.begin(), cfg.sigma_e2_list.end());
  return detail::run_grid(cfg, scenarios, false);
}

inline std::string format_csv(const std::vector<TrialSummary>& summaries) {
  std::ostringstream os;
  os << "n,scenario,detection_rate,mse,stderr,bound,seed\n";
  for (const auto& s : summaries) {
    using detail::format_double;
    os << s.n << ',' << s.scenario << ',' << format_double(s.detection_rate) << ','
       << format_double(s.empirical_mse) << ','
       << format_double(s.stderr_is_detection ? s.detection_stderr : s.mse_stderr) << ','
       << format_double(s.bound) << ',' << s.seed << '\n';
  }
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

inline void emit_csv(const std::vector<TrialSummary>& summaries, const std::string& path) {
  write_text_file(path, format_csv(summaries));
}

namespace detail {

inline std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace detail

inline std::string decode_report_csv_header() {
  return "estimate,c_bar_1,c_bar_2,kept,excluded,bw_condition,bw_least_squares,vandermonde_condition";
}

// Node index sets are space-separated inside their field.
inline std::string decode_report_csv_row(const DecodeReport& r) {
  using detail::format_double;
  std::string row = format_double(r.estimate) + ',' + format_double(r.c_bar_1) + ',' +
                    format_double(r.c_bar_2) + ',' + detail::join_indices(r.kept) + ',' +
                    detail::join_indices(r.excluded) + ',' +
                    format_double(r.diagnostics.bw_condition) + ',' +
                    (r.diagnostics.bw_least_squares ? "1" : "0") + ',' +
                    format_double(r.diagnostics.vandermonde_condition);
  return row;
}

inline std::string privacy_report_csv_header() {
  return "subset,base_epsilon,epsilon_composed,per_coordinate_eps,g_inner_products";
}

inline std::string privacy_report_csv_row(const PrivacyReport& r) {
  using detail::format_double;
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ' ';
      s += format_double(v[i]);
    }
    return s;
  };
  return detail::join_indices(r.subset) + ',' + format_double(r.base_epsilon) + ',' +
         format_double(r.epsilon_composed) + ',' + join(r.per_coordinate_eps) + ',' +
         join(r.g_inner_products);
}

}  // namespace dpmul

// Monte Carlo driver: detection rate and MSE curves over a grid of n, plus
// closed-form privacy and bound tables.

#include <cstdint>
#include <exception>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpmul/config.hpp"
#include "dpmul/experiment.hpp"
#include "dpmul/noise.hpp"
#include "dpmul/theory.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  std::string out;
  std::string n_grid;
  std::string sigma_e2;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "key = value configuration file")->required();
  sub->add_option("--seed", o.seed, "64-bit seed");
  sub->add_option("--out", o.out, "CSV output path (stdout when absent)");
  sub->add_option("--trials", o.trials, "trials per grid point");
  sub->add_option("--n-grid", o.n_grid, "comma-separated scale indices");
  sub->add_option("--sigma-e2", o.sigma_e2, "comma-separated adversary variances");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

dpmul::ExperimentConfig load(const Overrides& o) {
  dpmul::ExperimentConfig cfg = dpmul::experiment_from_config(dpmul::load_key_values(o.config));
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.out.empty()) cfg.output_path = o.out;
  if (!o.n_grid.empty()) cfg.n_grid = dpmul::detail::parse_list<std::uint64_t>("--n-grid", o.n_grid);
  if (!o.sigma_e2.empty()) {
    cfg.sigma_e2_list = dpmul::detail::parse_list<double>("--sigma-e2", o.sigma_e2);
  }
  dpmul::require_valid(cfg);
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    dpmul::write_text_file(path, text);
  }
}

// Every T-subset of the nodes, one row per (n, subset).
std::string privacy_table(const dpmul::ExperimentConfig& cfg) {
  const auto& base = cfg.scheme;
  std::string out = "n," + dpmul::privacy_report_csv_header() + "\n";
  for (std::uint64_t n : cfg.n_grid) {
    dpmul::SchemeParams p = base;
    p.scale_index = n;
    std::vector<std::size_t> subset(p.collusion);
    std::iota(subset.begin(), subset.end(), std::size_t{0});
    while (true) {
      out += std::to_string(n) + ',' + dpmul::privacy_report_csv_row(dpmul::collusion_epsilon(p, subset)) + "\n";
      std::size_t k = subset.size();
      while (k > 0 && subset[k - 1] == p.num_nodes - subset.size() + k - 1) --k;
      if (k == 0) break;
      ++subset[k - 1];
      for (std::size_t j = k; j < subset.size(); ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  return out;
}

std::string bounds_table(const dpmul::ExperimentConfig& cfg) {
  using dpmul::detail::format_double;
  const auto& p = cfg.scheme;
  const dpmul::SpacingStats sp = dpmul::spacing_stats(p.points);
  const double limit = dpmul::snr_a_limit(p.eta, p.sigma);
  std::string out = "n,snr_a,snr_a_limit,mse_lmmse,mse_limit,mse_converse,n0\n";
  const double n0 = dpmul::n0_threshold(sp.d_min, sp.d_max, p.collusion, p.max_adversaries);
  for (std::uint64_t n : cfg.n_grid) {
    const double snr = dpmul::snr_a_exact(p.eta, p.sigma, n);
    out += std::to_string(n) + ',' + format_double(snr) + ',' + format_double(limit) + ',' +
           format_double(dpmul::lmmse_mse(p.eta, snr)) + ',' +
           format_double(dpmul::lmmse_mse(p.eta, limit)) + ',' +
           format_double(dpmul::mse_bound(p.eta, p.epsilon)) + ',' + format_double(n0) + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private real-field multiplication simulator"};
  app.require_subcommand(1);

  Overrides detect_o, mse_o, privacy_o, bounds_o;
  auto* detect = app.add_subcommand("detect", "detection rate vs n");
  auto* mse = app.add_subcommand("mse", "MSE vs n against the LMMSE bound");
  auto* privacy = app.add_subcommand("privacy", "composed epsilon for every T-subset");
  auto* bounds = app.add_subcommand("bounds", "closed-form SNR and MSE overlays");
  add_common(detect, detect_o);
  add_common(mse, mse_o);
  add_common(privacy, privacy_o);
  add_common(bounds, bounds_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (detect->parsed()) {
      const auto cfg = load(detect_o);
      emit(dpmul::format_csv(dpmul::run_detection_experiment(cfg)), cfg.output_path);
    } else if (mse->parsed()) {
      const auto cfg = load(mse_o);
      emit(dpmul::format_csv(dpmul::run_mse_experiment(cfg)), cfg.output_path);
    } else if (privacy->parsed()) {
      const auto cfg = load(privacy_o);
      emit(privacy_table(cfg), cfg.output_path);
    } else if (bounds->parsed()) {
      const auto cfg = load(bounds_o);
      emit(bounds_table(cfg), cfg.output_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "dpmul_sim: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

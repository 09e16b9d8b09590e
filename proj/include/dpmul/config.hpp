#pragma once

// Plain-text key/value configuration:
//
//   # comment
//   N = 12
//   points = chebyshev        (or a comma-separated list)
//
// Node indices in erased/adversarial are 0-based.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpmul/channel.hpp"
#include "dpmul/errors.hpp"
#include "dpmul/experiment.hpp"
#include "dpmul/noise.hpp"
#include "dpmul/scheme.hpp"

namespace dpmul {

using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "N",      "T",      "E",         "A",          "eta",     "sigma",         "epsilon",
      "epsilon_slack",    "n",         "points",     "trials",  "seed",          "n_grid",
      "sigma_e2",         "input_law", "out",        "threads", "erased",        "adversarial",
      "offsets",          "allow_overlap"};
  return keys;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const std::string s = trim(text);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidParameter("config: cannot parse '" + s + "' for key " + key);
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
  return out;
}

}  // namespace detail

inline KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameter("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = detail::trim(std::string_view(body).substr(0, eq));
    std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (!detail::known_keys().contains(key)) {
      throw InvalidParameter("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    kv[key] = value;
  }
  return kv;
}

inline KeyValues load_key_values(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config '" + path + "'");
  return parse_key_values(f);
}

// sigma given: epsilon defaults to the Laplace parameter sqrt(2) / sigma.
// epsilon given alone: sigma^2 = optimal_variance(epsilon) + epsilon_slack.
inline SchemeParams scheme_from_config(const KeyValues& kv) {
  auto get = [&](const char* k) -> std::optional<std::string> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto require = [&](const char* k) {
    auto v = get(k);
    if (!v) throw InvalidParameter(std::string("config: missing key ") + k);
    return *v;
  };

  SchemeParams p;
  p.num_nodes = detail::parse_number<std::size_t>("N", require("N"));
  p.collusion = detail::parse_number<std::size_t>("T", require("T"));
  if (auto v = get("E")) p.max_erasures = detail::parse_number<std::size_t>("E", *v);
  if (auto v = get("A")) p.max_adversaries = detail::parse_number<std::size_t>("A", *v);
  p.eta = detail::parse_number<double>("eta", require("eta"));
  if (auto v = get("n")) p.scale_index = detail::parse_number<std::uint64_t>("n", *v);

  const auto sigma = get("sigma");
  const auto eps = get("epsilon");
  double slack = kDefaultVarianceSlack;
  if (auto v = get("epsilon_slack")) slack = detail::parse_number<double>("epsilon_slack", *v);
  if (sigma) {
    p.sigma = detail::parse_number<double>("sigma", *sigma);
    p.epsilon = eps ? detail::parse_number<double>("epsilon", *eps)
                    : (p.sigma > 0.0 ? laplace_epsilon(p.sigma) : 0.0);
  } else if (eps) {
    p.epsilon = detail::parse_number<double>("epsilon", *eps);
    p.sigma = sigma_from_epsilon(p.epsilon, slack);
  } else {
    throw InvalidParameter("config: one of sigma or epsilon is required");
  }

  const std::string pts = get("points").value_or("chebyshev");
  p.points = pts == "chebyshev" ? chebyshev_points(p.num_nodes) : detail::parse_list<double>("points", pts);
  return p;
}

// A fixed plan is present when erased or adversarial is set. Without offsets
// the adversaries draw Gaussian corruption at the scenario's variance.
inline std::optional<FaultPlan> fault_plan_from_config(const KeyValues& kv) {
  const bool has_e = kv.contains("erased");
  const bool has_a = kv.contains("adversarial");
  if (!has_e && !has_a) {
    if (kv.contains("offsets")) throw InvalidParameter("config: offsets given without adversarial");
    return std::nullopt;
  }
  FaultPlan plan;
  if (has_e) plan.erased = detail::parse_list<std::size_t>("erased", kv.at("erased"));
  if (has_a) plan.adversarial = detail::parse_list<std::size_t>("adversarial", kv.at("adversarial"));
  if (auto it = kv.find("offsets"); it != kv.end()) {
    plan.corruption = FixedOffsets{detail::parse_list<double>("offsets", it->second)};
  }
  if (auto it = kv.find("allow_overlap"); it != kv.end()) {
    plan.allow_overlap = it->second == "true" || it->second == "1";
  }
  return plan;
}

inline std::string fault_plan_to_config(const FaultPlan& plan) {
  auto join = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(v[i])>>) {
        s += detail::format_double(v[i]);
      } else {
        s += std::to_string(v[i]);
      }
    }
    return s;
  };
  std::string out = "erased = " + join(plan.erased) + "\n";
  out += "adversarial = " + join(plan.adversarial) + "\n";
  if (const auto* fixed = std::get_if<FixedOffsets>(&plan.corruption)) {
    out += "offsets = " + join(fixed->offsets) + "\n";
  }
  if (plan.allow_overlap) out += "allow_overlap = true\n";
  return out;
}

inline ExperimentConfig experiment_from_config(const KeyValues& kv) {
  ExperimentConfig cfg;
  cfg.scheme = scheme_from_config(kv);
  if (auto it = kv.find("trials"); it != kv.end()) {
    cfg.trials = detail::parse_number<std::size_t>("trials", it->second);
  }
  if (auto it = kv.find("seed"); it != kv.end()) {
    cfg.seed = detail::parse_number<std::uint64_t>("seed", it->second);
  }
  if (auto it = kv.find("n_grid"); it != kv.end()) {
    cfg.n_grid = detail::parse_list<std::uint64_t>("n_grid", it->second);
  }
  if (auto it = kv.find("sigma_e2"); it != kv.end()) {
    cfg.sigma_e2_list = detail::parse_list<double>("sigma_e2", it->second);
  }
  if (auto it = kv.find("threads"); it != kv.end()) {
    cfg.threads = detail::parse_number<std::size_t>("threads", it->second);
  }
  if (auto it = kv.find("input_law"); it != kv.end()) {
    if (it->second == "gaussian") {
      cfg.input_law = InputLaw::gaussian;
    } else if (it->second == "uniform") {
      cfg.input_law = InputLaw::uniform;
    } else {
      throw InvalidParameter("config: input_law must be gaussian or uniform");
    }
  }
  if (auto it = kv.find("out"); it != kv.end()) cfg.output_path = it->second;
  cfg.fixed_plan = fault_plan_from_config(kv);
  return cfg;
}

}  // namespace dpmul

#pragma once

// Erasure/adversary channel between the nodes and the decoder.
//
// apply_channel returns the decoder-visible ReceivedWord and the ground truth
// as separate objects; the decoder API only accepts the former.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dpmul/errors.hpp"
#include "dpmul/random.hpp"
#include "dpmul/scheme.hpp"

namespace dpmul {

// A value, or nullopt for the erasure symbol.
using ReceivedSymbol = std::optional<double>;

struct GaussianCorruption {
  double variance = 0.0;
};

// One offset per adversarial node, in the order of FaultPlan::adversarial.
struct FixedOffsets {
  std::vector<double> offsets;
};

using Corruption = std::variant<GaussianCorruption, FixedOffsets>;

struct FaultPlan {
  std::vector<std::size_t> erased;
  std::vector<std::size_t> adversarial;
  Corruption corruption = GaussianCorruption{};
  bool allow_overlap = false;
};

struct ReceivedWord {
  std::vector<ReceivedSymbol> symbols;

  std::size_t size() const { return symbols.size(); }
  bool erased(std::size_t i) const { return !symbols[i].has_value(); }
};

// Scoring-only view of what the channel did.
struct GroundTruth {
  std::vector<double> products;       // uncorrupted node outputs
  std::vector<double> distortions;    // realized offset per adversarial node
  std::vector<std::size_t> adversarial;
};

struct ChannelOutput {
  ReceivedWord word;
  GroundTruth truth;
};

inline void validate_plan(const FaultPlan& plan, std::size_t num_nodes, std::size_t max_erasures,
                          std::size_t max_adversaries) {
  if (plan.erased.size() > max_erasures) throw InvalidPlan("fault plan: more than E erasures");
  if (plan.adversarial.size() > max_adversaries) {
    throw InvalidPlan("fault plan: more than A adversaries");
  }
  auto check_set = [num_nodes](const std::vector<std::size_t>& v, const char* what) {
    std::vector<std::size_t> s = v;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw InvalidPlan(std::string("fault plan: duplicate ") + what + " node");
    }
    if (!s.empty() && s.back() >= num_nodes) {
      throw InvalidPlan(std::string("fault plan: ") + what + " node out of range");
    }
  };
  check_set(plan.erased, "erased");
  check_set(plan.adversarial, "adversarial");
  if (!plan.allow_overlap) {
    for (std::size_t a : plan.adversarial) {
      if (std::find(plan.erased.begin(), plan.erased.end(), a) != plan.erased.end()) {
        throw InvalidPlan("fault plan: erased and adversarial sets overlap");
      }
    }
  }
  if (const auto* fixed = std::get_if<FixedOffsets>(&plan.corruption)) {
    if (fixed->offsets.size() != plan.adversarial.size()) {
      throw InvalidPlan("fault plan: need one offset per adversarial node");
    }
  } else if (!(std::get<GaussianCorruption>(plan.corruption).variance >= 0.0)) {
    throw InvalidPlan("fault plan: corruption variance must be >= 0");
  }
}

inline ChannelOutput apply_channel(std::span<const double> products, const FaultPlan& plan,
                                   const SchemeParams& p, Rng& rng) {
  validate_plan(plan, products.size(), p.max_erasures, p.max_adversaries);

  ChannelOutput out;
  out.truth.products.assign(products.begin(), products.end());
  out.truth.adversarial = plan.adversarial;
  out.word.symbols.assign(products.begin(), products.end());

  std::vector<double> offsets;
  if (const auto* fixed = std::get_if<FixedOffsets>(&plan.corruption)) {
    offsets = fixed->offsets;
  } else {
    const double sd = std::sqrt(std::get<GaussianCorruption>(plan.corruption).variance);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t k = 0; k < plan.adversarial.size(); ++k) offsets.push_back(sd * gauss(rng));
  }
  for (std::size_t k = 0; k < plan.adversarial.size(); ++k) {
    const std::size_t i = plan.adversarial[k];
    out.word.symbols[i] = products[i] + offsets[k];
  }
  out.truth.distortions = std::move(offsets);
  for (std::size_t i : plan.erased) out.word.symbols[i] = std::nullopt;
  return out;
}

// Uniformly random disjoint erased (size E) and adversarial (size A) sets.
inline FaultPlan sample_fault_plan(const SchemeParams& p, double sigma_e2, Rng& rng) {
  if (p.max_erasures + p.max_adversaries > p.num_nodes) {
    throw InvalidParameter("sample_fault_plan: E + A exceeds N");
  }
  if (!(sigma_e2 >= 0.0)) throw InvalidParameter("sample_fault_plan: sigma_e2 must be >= 0");
  // Partial Fisher-Yates: the first E + A slots become a uniform random draw.
  std::vector<std::size_t> order(p.num_nodes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t need = p.max_erasures + p.max_adversaries;
  for (std::size_t k = 0; k < need; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, p.num_nodes - 1);
    std::swap(order[k], order[pick(rng)]);
  }
  FaultPlan plan;
  plan.erased.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p.max_erasures));
  plan.adversarial.assign(order.begin() + static_cast<std::ptrdiff_t>(p.max_erasures),
                          order.begin() + static_cast<std::ptrdiff_t>(need));
  std::sort(plan.erased.begin(), plan.erased.end());
  std::sort(plan.adversarial.begin(), plan.adversarial.end());
  plan.corruption = GaussianCorruption{sigma_e2};
  return plan;
}

}  // namespace dpmul

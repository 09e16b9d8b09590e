#pragma once

// Randomized exact-code decoding instances: node outputs lie exactly on a
// degree-T polynomial, then A nodes receive a gross corruption.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "dpmul/channel.hpp"
#include "dpmul/random.hpp"
#include "dpmul/scheme.hpp"
#include "oracles.hpp"

struct ExactInstance {
  dpmul::SchemeParams params;
  std::vector<double> poly;  // true degree-T coefficients
  dpmul::ReceivedWord word;
  std::vector<std::size_t> corrupted;
};

// Distinct points in [-1, 1] with |x| and every gap at least `sep`.
inline std::vector<double> random_points(std::size_t n, double sep, dpmul::Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    std::vector<double> s = x;
    std::sort(s.begin(), s.end());
    bool ok = std::all_of(x.begin(), x.end(), [sep](double v) { return std::abs(v) >= sep; });
    for (std::size_t i = 1; i < n && ok; ++i) ok = s[i] - s[i - 1] >= sep;
    if (ok) return x;
  }
}

inline ExactInstance make_exact_instance(std::size_t t, std::size_t a, std::size_t e, std::size_t corruptions,
                                         dpmul::Rng& rng) {
  ExactInstance inst;
  auto& p = inst.params;
  p.collusion = t;
  p.max_adversaries = a;
  p.max_erasures = e;
  p.num_nodes = t + 2 * a + 1 + e;
  p.eta = 1.0;
  p.sigma = 0.5;
  p.scale_index = 1000;
  p.points = random_points(p.num_nodes, 0.05, rng);

  std::normal_distribution<double> g(0.0, 1.0);
  inst.poly.resize(t + 1);
  for (auto& c : inst.poly) c = g(rng);

  std::vector<std::size_t> order(p.num_nodes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> erased(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(e));
  inst.corrupted.assign(order.begin() + static_cast<std::ptrdiff_t>(e),
                        order.begin() + static_cast<std::ptrdiff_t>(e + corruptions));
  std::sort(inst.corrupted.begin(), inst.corrupted.end());

  std::uniform_real_distribution<double> mag(1.0, 10.0);
  inst.word.symbols.resize(p.num_nodes);
  for (std::size_t i = 0; i < p.num_nodes; ++i) inst.word.symbols[i] = oracle::eval(inst.poly, p.points[i]);
  for (std::size_t i : inst.corrupted) {
    const double sign = dpmul::uniform_open(rng) < 0.5 ? -1.0 : 1.0;
    *inst.word.symbols[i] += sign * mag(rng);
  }
  for (std::size_t i : erased) inst.word.symbols[i] = std::nullopt;
  return inst;
}

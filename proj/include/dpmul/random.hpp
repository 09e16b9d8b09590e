#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace dpmul {

using Rng = std::mt19937_64;

// Derives an independent generator for one stream of a seeded run. The same
// (seed, stream) always yields the same sequence, so trials can run in any
// order or on any thread.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * stream.size());
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (std::uint64_t s : stream) {
    words.push_back(static_cast<std::uint32_t>(s));
    words.push_back(static_cast<std::uint32_t>(s >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

// Uniform draw on the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  while (u <= 0.0) u = dist(rng);
  return u;
}

}  // namespace dpmul

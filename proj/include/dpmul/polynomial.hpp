#pragma once

#include <span>

namespace dpmul {

// Evaluates sum_j coeffs[j] * x^j.
template <typename T>
T horner(std::span<const double> coeffs, T x) {
  T acc{0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace dpmul

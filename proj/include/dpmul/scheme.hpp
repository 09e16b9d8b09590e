#pragma once

// Public parameters of the coding scheme and the evaluation-point helpers
// shared by every other module.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dpmul/errors.hpp"

namespace dpmul {

// Points closer to zero than this are treated as zero.
inline constexpr double kZeroPointTolerance = 1e-12;

struct SchemeParams {
  std::size_t num_nodes = 0;        // N
  std::size_t collusion = 1;        // T
  std::size_t max_erasures = 0;     // E
  std::size_t max_adversaries = 0;  // A
  double eta = 0.0;                 // bound on E[A^2], E[B^2]
  double sigma = 1.0;               // std of R_1 and S_1
  double epsilon = 1.0;             // DP target, coupled with sigma (see noise.hpp)
  std::uint64_t scale_index = 1;    // n
  std::vector<double> points;       // x_1..x_N

  // T + 2A + 1 symbols feed the error-locator system.
  std::size_t decode_width() const { return collusion + 2 * max_adversaries + 1; }
};

struct SpacingStats {
  double d_min = 0.0;
  double d_max = 0.0;
};

// x_i = cos((2i - 1) pi / 2N), i = 1..N, in decreasing order.
inline std::vector<double> chebyshev_points(std::size_t n) {
  if (n == 0) throw InvalidParameter("chebyshev_points: N must be positive");
  std::vector<double> x(n);
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::cos(static_cast<double>(2 * i + 1) * std::numbers::pi / denom);
  }
  return x;
}

// Returns every violated invariant; an empty list means the parameters are valid.
inline std::vector<std::string> validate_params(const SchemeParams& p) {
  std::vector<std::string> v;
  if (p.num_nodes == 0) v.emplace_back("N >= 1");
  if (p.collusion < 1) v.emplace_back("T >= 1");
  if (p.num_nodes < p.collusion + p.max_erasures + 2 * p.max_adversaries + 1) {
    v.emplace_back("N >= T+E+2A+1");
  }
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) v.emplace_back("sigma > 0");
  if (!(p.eta >= 0.0) || !std::isfinite(p.eta)) v.emplace_back("eta >= 0");
  if (!(p.epsilon > 0.0)) v.emplace_back("epsilon > 0");
  if (p.scale_index < 1) v.emplace_back("n >= 1");
  if (p.points.size() != p.num_nodes) v.emplace_back("points count == N");

  bool finite = true;
  bool nonzero = true;
  for (double x : p.points) {
    if (!std::isfinite(x)) finite = false;
    if (std::abs(x) < kZeroPointTolerance) nonzero = false;
  }
  if (!finite) v.emplace_back("points finite");
  if (!nonzero) v.emplace_back("points nonzero");

  std::vector<double> sorted = p.points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    v.emplace_back("points distinct");
  }
  return v;
}

inline void require_valid(const SchemeParams& p) {
  const auto v = validate_params(p);
  if (v.empty()) return;
  std::string msg = "invalid scheme parameters:";
  for (const auto& s : v) msg += " [" + s + "]";
  throw InvalidParameter(msg);
}

inline SpacingStats spacing_stats(std::span<const double> points) {
  if (points.size() < 2) throw InvalidParameter("spacing_stats: need at least 2 points");
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  SpacingStats s;
  s.d_min = sorted[1] - sorted[0];
  for (std::size_t i = 2; i < sorted.size(); ++i) {
    s.d_min = std::min(s.d_min, sorted[i] - sorted[i - 1]);
  }
  s.d_max = sorted.back() - sorted.front();
  if (!(s.d_min > 0.0)) throw InvalidParameter("spacing_stats: points must be distinct");
  return s;
}

inline std::vector<double> gather(std::span<const double> values,
                                  std::span<const std::size_t> idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(values[i]);
  return out;
}

}  // namespace dpmul

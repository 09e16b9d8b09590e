#pragma once

// Error-excluding decoder: pick T+2A+1 surviving symbols, solve the real-field
// Berlekamp-Welch system for a monic error locator E(x), keep the T+1 nodes
// where |E(x)| is largest, interpolate the degree-T product polynomial on
// them, and combine m_0 and m_T with LMMSE weights.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dpmul/channel.hpp"
#include "dpmul/encoder.hpp"
#include "dpmul/errors.hpp"
#include "dpmul/noise.hpp"
#include "dpmul/polynomial.hpp"
#include "dpmul/scheme.hpp"

namespace dpmul {

struct BWSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  std::vector<std::size_t> point_indices;
  std::vector<double> points;
  std::size_t collusion = 0;
  std::size_t adversaries = 0;
};

struct ErrorLocator {
  std::vector<double> e_coeffs;  // e_0..e_{A-1}; e_A = 1 is implicit
  std::vector<double> q_coeffs;  // q_0..q_{T+A}

  std::size_t degree() const { return e_coeffs.size(); }

  double evaluate(double x) const {
    double acc = 1.0;
    for (auto it = e_coeffs.rbegin(); it != e_coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
};

struct LocatorSolution {
  ErrorLocator locator;
  double condition = 1.0;
  bool least_squares = false;
};

struct Ranking {
  std::vector<std::size_t> order;  // node indices, most trusted first
  std::vector<double> magnitudes;  // |E(x)| per input position
};

// Weights for estimate = d1 * C1 + d2 * C2. The same estimator is also kept
// in the basis (C1, (C2 - C1) / delta), delta = n^{-3/2}, where its
// coefficients stay O(1) for every n.
struct LmmseWeights {
  double d1 = 0.0;
  double d2 = 0.0;
  double w_base = 0.0;  // weight on C1
  double w_gap = 0.0;   // weight on (C2 - C1) / delta
  double delta = 0.0;

  double apply_gap(double c_bar_1, double gap) const { return w_base * c_bar_1 + w_gap * (gap / delta); }
};

struct DecodeDiagnostics {
  double bw_condition = 1.0;
  bool bw_least_squares = false;
  double vandermonde_condition = 1.0;
};

struct DecodeReport {
  std::vector<std::size_t> selected;
  ErrorLocator locator;
  std::vector<double> locator_magnitudes;  // aligned with selected
  std::vector<std::size_t> kept;
  std::vector<std::size_t> excluded;
  CoeffVector coeffs;
  double c_bar_1 = 0.0;
  double c_bar_2 = 0.0;
  LmmseWeights weights;
  double estimate = 0.0;
  DecodeDiagnostics diagnostics;
};

struct DecodeOptions {
  // Replaces the LMMSE weights with a plain (d1, d2) pair.
  std::optional<std::pair<double, double>> weights;
};

// Lowest-index T+2A+1 non-erased symbols.
inline std::vector<std::size_t> select_symbols(const ReceivedWord& w, const SchemeParams& p) {
  const std::size_t need = p.decode_width();
  std::vector<std::size_t> s;
  s.reserve(need);
  for (std::size_t i = 0; i < w.size() && s.size() < need; ++i) {
    if (!w.erased(i)) s.push_back(i);
  }
  if (s.size() < need) {
    throw InsufficientSymbols("decoder: " + std::to_string(s.size()) + " surviving symbols, need " +
                              std::to_string(need));
  }
  return s;
}

// Row i: [Y_i, x_i Y_i, ..., x_i^{A-1} Y_i, -1, -x_i, ..., -x_i^{T+A}],
// rhs_i = -x_i^A Y_i.
inline BWSystem build_bw_system(std::span<const double> y, std::span<const double> x, std::size_t t,
                                std::size_t a) {
  const std::size_t width = t + 2 * a + 1;
  if (y.size() != width || x.size() != width) {
    throw InvalidParameter("build_bw_system: need exactly T+2A+1 values and points");
  }
  BWSystem sys;
  sys.collusion = t;
  sys.adversaries = a;
  sys.points.assign(x.begin(), x.end());
  sys.point_indices.resize(width);
  std::iota(sys.point_indices.begin(), sys.point_indices.end(), std::size_t{0});
  sys.matrix.resize(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(width));
  sys.rhs.resize(static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < width; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    double pw = 1.0;
    for (std::size_t j = 0; j < a; ++j) {
      sys.matrix(r, static_cast<Eigen::Index>(j)) = pw * y[i];
      pw *= x[i];
    }
    sys.rhs(r) = -pw * y[i];
    pw = 1.0;
    for (std::size_t j = 0; j <= t + a; ++j) {
      sys.matrix(r, static_cast<Eigen::Index>(a + j)) = -pw;
      pw *= x[i];
    }
  }
  return sys;
}

inline LocatorSolution solve_error_locator(const BWSystem& sys) {
  const std::size_t a = sys.adversaries;
  const std::size_t t = sys.collusion;
  LocatorSolution out;
  if (a == 0) {
    out.locator.q_coeffs.assign(t + 1, 0.0);
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.condition = smin > 0.0 ? sv(0) / smin : INFINITY;

  Eigen::VectorXd b;
  if (out.condition <= kConditionCutoff) {
    b = sys.matrix.partialPivLu().solve(sys.rhs);
  } else {
    // Rank-deficient (fewer than A real errors) or numerically so: minimum-norm
    // least squares; only the relative |E| magnitudes are used downstream.
    // Rank is judged at machine precision: distortions near n^{-1.6} live in
    // singular directions well below the 1e-12 cutoff at large n.
    b = svd.solve(sys.rhs);
    out.least_squares = true;
  }
  out.locator.e_coeffs.assign(b.data(), b.data() + a);
  out.locator.q_coeffs.assign(b.data() + a, b.data() + b.size());
  return out;
}

// Sort by |E(x)| descending, ties to the lower node index.
inline Ranking rank_nodes(const ErrorLocator& loc, std::span<const double> x,
                          std::span<const std::size_t> nodes) {
  if (x.size() != nodes.size()) throw InvalidParameter("rank_nodes: size mismatch");
  Ranking r;
  r.magnitudes.reserve(x.size());
  for (double xi : x) r.magnitudes.push_back(std::abs(loc.evaluate(xi)));
  std::vector<std::size_t> pos(x.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::sort(pos.begin(), pos.end(), [&](std::size_t i, std::size_t j) {
    if (r.magnitudes[i] != r.magnitudes[j]) return r.magnitudes[i] > r.magnitudes[j];
    return nodes[i] < nodes[j];
  });
  r.order.reserve(pos.size());
  for (std::size_t i : pos) r.order.push_back(nodes[i]);
  return r;
}

// Monomial coefficients of the interpolating polynomial through (x_i, y_i):
// Newton divided differences followed by conversion to the monomial basis
// (Bjorck-Pereyra), never forming an inverse.
inline CoeffVector interpolate_coeffs(std::span<const double> y, std::span<const double> x) {
  const std::size_t m = x.size();
  if (y.size() != m || m == 0) throw InvalidParameter("interpolate_coeffs: size mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (x[i] == x[j]) throw InvalidParameter("interpolate_coeffs: duplicate points");
    }
  }
  std::vector<double> c(y.begin(), y.end());
  for (std::size_t k = 0; k + 1 < m; ++k) {
    for (std::size_t i = m - 1; i > k; --i) c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - k - 1]);
  }
  for (std::size_t k = m - 1; k-- > 0;) {
    for (std::size_t i = k; i + 1 < m; ++i) c[i] -= x[k] * c[i + 1];
  }
  return CoeffVector{std::move(c)};
}

inline double vandermonde_condition(std::span<const double> x) {
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd v(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double pw = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      v(i, j) = pw;
      pw *= x[static_cast<std::size_t>(i)];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  const auto& sv = svd.singularValues();
  return sv(m - 1) > 0.0 ? sv(0) / sv(m - 1) : INFINITY;
}

// (C1, C2) = (m_0, m_0 + m_T); for T = 1 that is m_0 + m_1.
inline std::pair<double, double> combine_pair(const CoeffVector& m) {
  if (m.m.size() < 2) throw InvalidParameter("combine_pair: need at least two coefficients");
  return {m.m.front(), m.m.front() + m.m.back()};
}

// Population second moments of (C1, C2), each the product of two independent
// factors (V + R)(V + c R), c in {1, 1 + n^{-3/2}}.
inline Eigen::Matrix2d lmmse_covariance(double eta, double sigma, std::uint64_t n) {
  const double s2 = sigma * sigma;
  const double c = 1.0 + std::pow(static_cast<double>(n), -1.5);
  const double f11 = eta + s2;
  const double f12 = eta + c * s2;
  const double f22 = eta + c * c * s2;
  Eigen::Matrix2d k;
  k << f11 * f11, f12 * f12, f12 * f12, f22 * f22;
  return k;
}

// Same second moments in the basis (C1, (C2 - C1) / delta), written out
// analytically so no cancellation happens at large n.
inline Eigen::Matrix2d lmmse_covariance_stable(double eta, double sigma, std::uint64_t n) {
  const double s2 = sigma * sigma;
  const double delta = std::pow(static_cast<double>(n), -1.5);
  Eigen::Matrix2d k;
  k(0, 0) = (eta + s2) * (eta + s2);
  k(0, 1) = s2 * (2.0 * eta + (2.0 + delta) * s2);
  k(1, 0) = k(0, 1);
  k(1, 1) = s2 * (2.0 * eta + s2 * (2.0 + delta) * (2.0 + delta));
  return k;
}

inline LmmseWeights lmmse_weights(double eta, double sigma, std::uint64_t n) {
  if (!(eta >= 0.0) || !(sigma > 0.0) || n < 1) {
    throw InvalidParameter("lmmse_weights: need eta >= 0, sigma > 0, n >= 1");
  }
  LmmseWeights w;
  w.delta = std::pow(static_cast<double>(n), -1.5);
  if (eta == 0.0) return w;

  const Eigen::Matrix2d k = lmmse_covariance_stable(eta, sigma, n);
  const double det = k(0, 0) * k(1, 1) - k(0, 1) * k(1, 0);
  if (!(std::abs(det) > 1e-14 * k(0, 0) * k(1, 1))) {
    throw DegenerateWeights("lmmse_weights: covariance is singular");
  }
  // Right-hand side (E[AB C1], E[AB (C2 - C1) / delta]) = (eta^2, 0).
  const double e2 = eta * eta;
  w.w_base = k(1, 1) * e2 / det;
  w.w_gap = -k(1, 0) * e2 / det;
  w.d2 = w.w_gap / w.delta;
  w.d1 = w.w_base - w.d2;
  return w;
}

inline DecodeReport decode(const ReceivedWord& w, const SchemeParams& p, const DecodeOptions& opt = {}) {
  require_valid(p);
  if (w.size() != p.num_nodes) throw InvalidParameter("decode: word length differs from N");
  const std::size_t t = p.collusion;
  const std::size_t a = p.max_adversaries;

  DecodeReport rep;
  rep.selected = select_symbols(w, p);
  std::vector<double> y;
  y.reserve(rep.selected.size());
  for (std::size_t i : rep.selected) y.push_back(*w.symbols[i]);
  const std::vector<double> x = gather(p.points, rep.selected);

  BWSystem sys = build_bw_system(y, x, t, a);
  sys.point_indices = rep.selected;
  LocatorSolution sol = solve_error_locator(sys);
  rep.locator = std::move(sol.locator);
  rep.diagnostics.bw_condition = sol.condition;
  rep.diagnostics.bw_least_squares = sol.least_squares;

  Ranking rank = rank_nodes(rep.locator, x, rep.selected);
  rep.locator_magnitudes = std::move(rank.magnitudes);
  rep.kept.assign(rank.order.begin(), rank.order.begin() + static_cast<std::ptrdiff_t>(t + 1));
  rep.excluded.assign(rank.order.begin() + static_cast<std::ptrdiff_t>(t + 1), rank.order.end());

  std::vector<double> y_kept;
  for (std::size_t i : rep.kept) y_kept.push_back(*w.symbols[i]);
  const std::vector<double> x_kept = gather(p.points, rep.kept);
  rep.coeffs = interpolate_coeffs(y_kept, x_kept);
  rep.diagnostics.vandermonde_condition = vandermonde_condition(x_kept);

  std::tie(rep.c_bar_1, rep.c_bar_2) = combine_pair(rep.coeffs);
  if (opt.weights) {
    rep.weights.d1 = opt.weights->first;
    rep.weights.d2 = opt.weights->second;
    rep.estimate = rep.weights.d1 * rep.c_bar_1 + rep.weights.d2 * rep.c_bar_2;
  } else {
    rep.weights = lmmse_weights(p.eta, p.sigma, p.scale_index);
    // C2 - C1 is m_T itself; using it directly avoids the cancellation.
    rep.estimate = rep.weights.apply_gap(rep.c_bar_1, rep.coeffs.m.back());
  }
  return rep;
}

}  // namespace dpmul

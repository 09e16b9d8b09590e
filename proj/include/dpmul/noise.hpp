#pragma once

// Layered noise for the encoder and the analytic privacy accountant.
//
// R_1 and S_1 carry the privacy of the inputs. They are Laplace with
// variance sigma^2, i.e. scale b = sigma / sqrt(2), which gives
// eps_bar = sqrt(2) / sigma for unit sensitivity. R_2..R_T and S_2..S_T are
// unit-variance Laplace (b = 1 / sqrt(2)).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpmul/errors.hpp"
#include "dpmul/random.hpp"
#include "dpmul/scheme.hpp"

namespace dpmul {

inline constexpr double kConditionCutoff = 1e12;
inline constexpr double kDefaultVarianceSlack = 1e-3;

struct NoiseDraw {
  std::vector<double> r;  // R_1..R_T
  std::vector<double> s;  // S_1..S_T
};

struct PrivacyReport {
  std::vector<std::size_t> subset;
  double base_epsilon = 0.0;  // eps_bar of the R_1 mechanism
  double epsilon_composed = 0.0;
  std::vector<double> per_coordinate_eps;
  std::vector<double> g_inner_products;  // entries of inverse(G_bar) * 1
  double condition = 0.0;
};

// Smallest variance of any additive mechanism that is eps-DP for unit
// sensitivity (the staircase optimum).
inline double optimal_variance(double eps) {
  if (!(eps > 0.0)) throw InvalidParameter("optimal_variance: eps must be positive");
  const double a = std::exp(-2.0 * eps / 3.0);
  const double e = std::exp(-eps);
  const double num = std::cbrt(4.0) * a * (1.0 + a) + e;
  const double den = -std::expm1(-eps);
  return num / (den * den);
}

// sigma^2 = optimal_variance(eps) + slack.
inline double sigma_from_epsilon(double eps, double slack = kDefaultVarianceSlack) {
  if (slack < 0.0) throw InvalidParameter("sigma_from_epsilon: slack must be >= 0");
  return std::sqrt(optimal_variance(eps) + slack);
}

// DP parameter of Laplace noise with standard deviation sigma.
inline double laplace_epsilon(double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("laplace_epsilon: sigma must be positive");
  return std::numbers::sqrt2 / sigma;
}

// One draw from the density exp(-|x| / b) / 2b.
inline double laplace_sample(double scale_b, Rng& rng) {
  const double u = uniform_open(rng) - 0.5;
  const double mag = -scale_b * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -mag : mag;
}

inline NoiseDraw draw_noise(const SchemeParams& p, Rng& rng) {
  const std::size_t t = p.collusion;
  const double base_b = p.sigma / std::numbers::sqrt2;
  const double unit_b = 1.0 / std::numbers::sqrt2;
  NoiseDraw d;
  d.r.resize(t);
  d.s.resize(t);
  d.r[0] = laplace_sample(base_b, rng);
  d.s[0] = laplace_sample(base_b, rng);
  for (std::size_t k = 1; k < t; ++k) {
    d.r[k] = laplace_sample(unit_b, rng);
    d.s[k] = laplace_sample(unit_b, rng);
  }
  return d;
}

// Analytic DP parameter of what a colluding set of T nodes observes about A
// (the B side is symmetric).
inline PrivacyReport collusion_epsilon(const SchemeParams& p, std::span<const std::size_t> subset) {
  const std::size_t t = p.collusion;
  if (t < 1) throw InvalidParameter("collusion_epsilon: T must be >= 1");
  if (subset.size() != t) throw InvalidParameter("collusion_epsilon: subset must have T nodes");
  for (std::size_t i = 0; i < t; ++i) {
    if (subset[i] >= p.points.size()) throw InvalidParameter("collusion_epsilon: node out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (subset[i] == subset[j]) throw InvalidParameter("collusion_epsilon: duplicate node");
    }
  }

  // Rows [x^T, x, x^2, ..., x^(T-1)] at the colluders' points.
  Eigen::MatrixXd g(t, t);
  for (std::size_t i = 0; i < t; ++i) {
    const double x = p.points[subset[i]];
    g(i, 0) = std::pow(x, static_cast<double>(t));
    for (std::size_t k = 1; k < t; ++k) g(i, k) = std::pow(x, static_cast<double>(k));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const auto& sv = svd.singularValues();
  const double cond = sv(t - 1) > 0.0 ? sv(0) / sv(t - 1) : INFINITY;
  if (!(cond <= kConditionCutoff)) {
    throw DegenerateGeometry("collusion_epsilon: colluder matrix is numerically singular");
  }
  const Eigen::VectorXd v = g.partialPivLu().solve(Eigen::VectorXd::Ones(t));

  const double n = static_cast<double>(p.scale_index);
  const double n32 = n * std::sqrt(n);
  PrivacyReport rep;
  rep.subset.assign(subset.begin(), subset.end());
  rep.base_epsilon = laplace_epsilon(p.sigma);
  rep.condition = cond;
  rep.g_inner_products.assign(v.data(), v.data() + t);

  // A + (1 + 1 / (n^{3/2} v_1)) R_1: the sensitivity shrinks by that factor.
  const double lead = 1.0 + 1.0 / (n32 * v(0));
  rep.per_coordinate_eps.push_back(rep.base_epsilon / std::abs(lead));
  const double denom = 1.0 + n32 * v(0);
  for (std::size_t k = 1; k < t; ++k) {
    rep.per_coordinate_eps.push_back(std::numbers::sqrt2 * std::abs(n * v(k) / denom));
  }
  rep.epsilon_composed = 0.0;
  for (double e : rep.per_coordinate_eps) rep.epsilon_composed += e;
  return rep;
}

}  // namespace dpmul

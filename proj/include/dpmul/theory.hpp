#pragma once

// Closed-form privacy/accuracy quantities and the error-locator geometry
// bounds used for figure overlays and property checks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpmul/decoder.hpp"
#include "dpmul/errors.hpp"
#include "dpmul/noise.hpp"
#include "dpmul/scheme.hpp"

namespace dpmul {

// Converse-matching MSE bound eta^2 / (1 + SNR*)^2, SNR* = eta / sigma*(eps)^2.
inline double mse_bound(double eta, double eps) {
  if (!(eta >= 0.0)) throw InvalidParameter("mse_bound: eta must be >= 0");
  const double snr = eta / optimal_variance(eps);
  return eta * eta / ((1.0 + snr) * (1.0 + snr));
}

// Limit of the achievable SNR as n grows: eta^2 / sigma^4 + 2 eta / sigma^2.
inline double snr_a_limit(double eta, double sigma) {
  const double s2 = sigma * sigma;
  return eta * eta / (s2 * s2) + 2.0 * eta / s2;
}

inline double lmmse_mse(double eta, double snr) { return eta * eta / (1.0 + snr); }

// det(K1) / det(K2) - 1 for observation covariance K1 and noise covariance K2.
inline double lemma1_snr(const Eigen::Matrix2d& cov_obs, const Eigen::Matrix2d& cov_noise) {
  const double d2 = cov_noise.determinant();
  const double scale = cov_noise.cwiseAbs().maxCoeff();
  if (!(std::abs(d2) > 1e-14 * scale * scale)) {
    throw DegenerateGeometry("lemma1_snr: noise covariance is singular");
  }
  return cov_obs.determinant() / d2 - 1.0;
}

// SNR of the LMMSE combination of (C1, C2) at scale index n, O(1/n^2)
// residual terms omitted. Evaluated in the basis (C1, (C2 - C1) / delta) so
// both determinants stay O(1); the ratio is basis independent.
inline double snr_a_exact(double eta, double sigma, std::uint64_t n) {
  if (!(eta >= 0.0) || !(sigma > 0.0) || n < 1) {
    throw InvalidParameter("snr_a_exact: need eta >= 0, sigma > 0, n >= 1");
  }
  if (eta == 0.0) return 0.0;
  const Eigen::Matrix2d k1 = lmmse_covariance_stable(eta, sigma, n);
  Eigen::Matrix2d k2 = k1;
  // The signal AB enters C1 with gain 1 and the scaled gap with gain 0.
  k2(0, 0) -= eta * eta;
  return lemma1_snr(k1, k2);
}

struct SafePointReport {
  std::vector<std::complex<double>> roots;
  std::vector<std::size_t> safe;
  std::vector<std::size_t> unsafe;
  double d_min = 0.0;
  double d_max = 0.0;
  double floor = 0.0;      // (D_min / 2)^A
  double ratio_cap = 0.0;  // (1 + 2 D_max / D_min)^A
};

// A point is unsafe when some root lies strictly within D_min / 2 of it
// (distance measured in the complex plane).
inline SafePointReport classify_safe_points(std::span<const std::complex<double>> roots,
                                            std::span<const double> points) {
  const SpacingStats sp = spacing_stats(points);
  SafePointReport rep;
  rep.roots.assign(roots.begin(), roots.end());
  rep.d_min = sp.d_min;
  rep.d_max = sp.d_max;
  const double a = static_cast<double>(roots.size());
  rep.floor = std::pow(sp.d_min / 2.0, a);
  rep.ratio_cap = std::pow(1.0 + 2.0 * sp.d_max / sp.d_min, a);
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool unsafe = false;
    for (const auto& r : roots) {
      if (std::abs(std::complex<double>(points[i], 0.0) - r) < sp.d_min / 2.0) unsafe = true;
    }
    (unsafe ? rep.unsafe : rep.safe).push_back(i);
  }
  return rep;
}

// |prod_j (x - a_j)|.
inline double locator_magnitude(std::span<const std::complex<double>> roots, double x) {
  double acc = 1.0;
  for (const auto& r : roots) acc *= std::abs(std::complex<double>(x, 0.0) - r);
  return acc;
}

// Chebyshev/union upper bound on P(|r + t / sqrt(n) + u / n| >= n^beta) at
// evaluation point x.
inline double tail_bound(double x, std::size_t t, double sigma, double n, double beta) {
  if (!(beta > 0.0) || !(n >= 1.0)) throw InvalidParameter("tail_bound: need beta > 0, n >= 1");
  if (t < 1) throw InvalidParameter("tail_bound: T must be >= 1");
  const double x2 = x * x;
  auto xp = [x2](std::size_t k) { return std::pow(x2, static_cast<double>(k)); };  // x^{2k}
  const double s2 = sigma * sigma;
  double r_term = 0.0;
  for (std::size_t k = 2; k <= t; ++k) r_term += static_cast<double>(k - 1) * xp(k);
  for (std::size_t k = t + 1; k + 2 <= 2 * t; ++k) r_term += static_cast<double>(2 * t - 1 - k) * xp(k);
  double t_term = 0.0;
  for (std::size_t k = 1; k < t; ++k) t_term += xp(t + k);
  t_term *= 2.0 * s2;
  const double u_term = s2 * xp(2 * t);
  return 9.0 * std::pow(n, -2.0 * beta) * (r_term + t_term / n + u_term / (n * n));
}

// Scale index past which a distortion of at least n^{-distortion_exponent}
// is ranked below every safe point with high probability. beta is the tail
// exponent of the residuals; the defaults give the exponent 20/7.
inline double n0_threshold(double d_min, double d_max, std::size_t t, std::size_t a,
                           double beta = 0.05, double distortion_exponent = 1.6) {
  if (!(d_min > 0.0) || !(d_max >= d_min)) {
    throw InvalidParameter("n0_threshold: need 0 < d_min <= d_max");
  }
  const double margin = 2.0 - distortion_exponent - beta;
  if (!(margin > 0.0)) throw InvalidParameter("n0_threshold: need beta + exponent < 2");
  const double ratio = d_max / d_min;
  const double ta = static_cast<double>(t + a);
  const double inner = std::pow(ratio, ta) *
                       (1.0 + std::pow(1.0 + 2.0 * ratio, static_cast<double>(a)) * ta);
  return std::pow(inner, 1.0 / margin);
}

}  // namespace dpmul

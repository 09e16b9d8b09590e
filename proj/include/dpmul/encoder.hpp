#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dpmul/errors.hpp"
#include "dpmul/noise.hpp"
#include "dpmul/polynomial.hpp"
#include "dpmul/scheme.hpp"

namespace dpmul {

struct ShareSet {
  std::vector<double> a_shares;
  std::vector<double> b_shares;
};

// Coefficients m_0..m_T of the degree-T part of the product polynomial.
struct CoeffVector {
  std::vector<double> m;

  double evaluate(double x) const { return horner<double>(m, x); }
};

namespace detail {

inline void require_noise_shape(const NoiseDraw& noise, std::size_t t) {
  if (noise.r.size() != t || noise.s.size() != t) {
    throw InvalidParameter("noise draw must have T entries per side");
  }
}

// Coefficients of p(x) = (v + R_1) + (1/n) sum_{k=1}^{T-1} R_{k+1} x^k + n^{-3/2} R_1 x^T.
inline std::vector<double> encoding_poly(double v, const std::vector<double>& r, double n) {
  const std::size_t t = r.size();
  std::vector<double> c(t + 1, 0.0);
  c[0] = v + r[0];
  for (std::size_t k = 1; k < t; ++k) c[k] = r[k] / n;
  c[t] += r[0] / (n * std::sqrt(n));
  return c;
}

}  // namespace detail

inline ShareSet encode_shares(double a, double b, const NoiseDraw& noise, const SchemeParams& p) {
  detail::require_noise_shape(noise, p.collusion);
  const double n = static_cast<double>(p.scale_index);
  const auto pa = detail::encoding_poly(a, noise.r, n);
  const auto pb = detail::encoding_poly(b, noise.s, n);
  ShareSet s;
  s.a_shares.reserve(p.points.size());
  s.b_shares.reserve(p.points.size());
  for (double x : p.points) {
    s.a_shares.push_back(horner<double>(pa, x));
    s.b_shares.push_back(horner<double>(pb, x));
  }
  return s;
}

inline std::vector<double> node_products(const ShareSet& s) {
  if (s.a_shares.size() != s.b_shares.size()) {
    throw InvalidParameter("node_products: share vectors differ in length");
  }
  std::vector<double> c(s.a_shares.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = s.a_shares[i] * s.b_shares[i];
  return c;
}

// The coefficients the decoder is trying to recover. For T = 1 this is
// [m_0, m_1] with m_1 the n^{-3/2} cross term; the n^{-3} remainder is
// treated as residual.
inline CoeffVector ideal_coeffs(double a, double b, const NoiseDraw& noise, const SchemeParams& p) {
  const std::size_t t = p.collusion;
  detail::require_noise_shape(noise, t);
  const double n = static_cast<double>(p.scale_index);
  const double ar = a + noise.r[0];
  const double bs = b + noise.s[0];
  CoeffVector c;
  c.m.assign(t + 1, 0.0);
  c.m[0] = ar * bs;
  for (std::size_t j = 1; j < t; ++j) c.m[j] = (noise.s[j] * ar + noise.r[j] * bs) / n;
  c.m[t] = (noise.s[0] * ar + noise.r[0] * bs) / (n * std::sqrt(n));
  return c;
}

}  // namespace dpmul

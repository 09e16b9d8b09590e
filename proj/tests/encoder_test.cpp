#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dpmul/decoder.hpp"
#include "dpmul/encoder.hpp"
#include "dpmul/noise.hpp"

using namespace dpmul;

namespace {

SchemeParams make_params(std::size_t t, std::uint64_t n, std::vector<double> points) {
  SchemeParams p;
  p.num_nodes = points.size();
  p.collusion = t;
  p.eta = 1.0;
  p.sigma = 0.5;
  p.scale_index = n;
  p.points = std::move(points);
  return p;
}

NoiseDraw zeros(std::size_t t) { return NoiseDraw{std::vector<double>(t, 0.0), std::vector<double>(t, 0.0)}; }

// Full product polynomial by convolution of the two encoding polynomials.
std::vector<double> product_poly(double a, double b, const NoiseDraw& d, double n) {
  const auto pa = detail::encoding_poly(a, d.r, n);
  const auto pb = detail::encoding_poly(b, d.s, n);
  std::vector<double> c(pa.size() + pb.size() - 1, 0.0);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) c[i + j] += pa[i] * pb[j];
  }
  return c;
}

}  // namespace

TEST(EncodeShares, ZeroNoiseGivesSecretEverywhere) {
  const auto p = make_params(5, 10, chebyshev_points(12));
  const auto s = encode_shares(1.25, -0.5, zeros(5), p);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(s.a_shares[i], 1.25);
    EXPECT_EQ(s.b_shares[i], -0.5);
  }
}

TEST(EncodeShares, TOneHandValue) {
  const auto p = make_params(1, 1, {2.0});
  const NoiseDraw d{{1.0}, {0.0}};
  EXPECT_DOUBLE_EQ(encode_shares(0.0, 0.0, d, p).a_shares[0], 3.0);
}

TEST(EncodeShares, TTwoHandValue) {
  const auto p = make_params(2, 4, {1.0});
  const NoiseDraw d{{1.0, 2.0}, {0.0, 0.0}};
  EXPECT_DOUBLE_EQ(encode_shares(0.0, 0.0, d, p).a_shares[0], 1.625);
}

TEST(EncodeShares, WrongNoiseShapeIsError) {
  const auto p = make_params(3, 4, {1.0, 2.0});
  EXPECT_THROW(encode_shares(0.0, 0.0, zeros(2), p), InvalidParameter);
}

TEST(EncodeShares, SwappingSidesSwapsShares) {
  Rng rng = make_rng(21);
  const auto p = make_params(4, 50, chebyshev_points(9));
  for (int rep = 0; rep < 20; ++rep) {
    const NoiseDraw d = draw_noise(p, rng);
    const NoiseDraw swapped{d.s, d.r};
    const auto s1 = encode_shares(0.3, -1.7, d, p);
    const auto s2 = encode_shares(-1.7, 0.3, swapped, p);
    EXPECT_EQ(s1.a_shares, s2.b_shares);
    EXPECT_EQ(s1.b_shares, s2.a_shares);
  }
}

TEST(NodeProducts, Examples) {
  EXPECT_EQ(node_products(ShareSet{{2.0, 3.0}, {3.0, 4.0}}), (std::vector<double>{6.0, 12.0}));
  const auto p = make_params(3, 10, chebyshev_points(7));
  const auto c = node_products(encode_shares(1.5, -2.0, zeros(3), p));
  for (double v : c) EXPECT_EQ(v, -3.0);
}

TEST(NodeProducts, MatchesRecomputation) {
  Rng rng = make_rng(22);
  const auto p = make_params(5, 100, chebyshev_points(12));
  const auto d = draw_noise(p, rng);
  const auto s = encode_shares(0.7, 1.1, d, p);
  const auto c = node_products(s);
  const auto pa = detail::encoding_poly(0.7, d.r, 100.0);
  const auto pb = detail::encoding_poly(1.1, d.s, 100.0);
  for (std::size_t i = 0; i < 12; ++i) {
    double va = 0.0;
    double vb = 0.0;
    for (std::size_t k = 0; k < pa.size(); ++k) {
      va += pa[k] * std::pow(p.points[i], static_cast<double>(k));
      vb += pb[k] * std::pow(p.points[i], static_cast<double>(k));
    }
    EXPECT_NEAR(c[i], va * vb, 1e-13 * std::max(1.0, std::abs(va * vb)));
  }
  EXPECT_THROW(node_products(ShareSet{{1.0}, {}}), InvalidParameter);
}

TEST(IdealCoeffs, ZeroNoise) {
  const auto p = make_params(4, 10, chebyshev_points(8));
  const auto m = ideal_coeffs(2.0, 3.0, zeros(4), p);
  EXPECT_EQ(m.m, (std::vector<double>{6.0, 0.0, 0.0, 0.0, 0.0}));
}

TEST(IdealCoeffs, HandValueTTwo) {
  const auto p = make_params(2, 1, {1.0, 2.0, 3.0});
  const NoiseDraw d{{1.0, 0.0}, {1.0, 0.0}};
  EXPECT_EQ(ideal_coeffs(0.0, 0.0, d, p).m, (std::vector<double>{1.0, 0.0, 2.0}));
}

TEST(IdealCoeffs, TOneHasTwoEntries) {
  const auto p = make_params(1, 4, {1.0, 2.0});
  const NoiseDraw d{{0.5}, {-1.0}};
  const auto m = ideal_coeffs(1.0, 2.0, d, p);
  ASSERT_EQ(m.m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.m[0], 1.5 * 1.0);
  EXPECT_DOUBLE_EQ(m.m[1], (-1.0 * 1.5 + 0.5 * 1.0) / 8.0);
}

// The ideal coefficients are the low-order part of the convolution with all
// terms of order n^{-2} and smaller dropped.
TEST(IdealCoeffs, AgreeWithConvolutionUpToInverseSquare) {
  Rng rng = make_rng(23);
  for (std::size_t t : {1u, 2u, 3u, 5u}) {
    for (std::uint64_t n : {100u, 10000u}) {
      const auto p = make_params(t, n, chebyshev_points(t + 1));
      const auto d = draw_noise(p, rng);
      const auto m = ideal_coeffs(0.4, -0.9, d, p);
      const auto full = product_poly(0.4, -0.9, d, static_cast<double>(n));
      for (std::size_t j = 0; j <= t; ++j) {
        EXPECT_LT(std::abs(full[j] - m.m[j]), 50.0 / (static_cast<double>(n) * static_cast<double>(n)))
            << "t=" << t << " n=" << n << " j=" << j;
      }
    }
  }
}

TEST(IdealCoeffs, ResidualScalesAsInverseSquare) {
  const auto base = make_params(5, 1, chebyshev_points(12));
  Rng rng = make_rng(24);
  const NoiseDraw d = draw_noise(base, rng);
  std::vector<double> res;
  for (std::uint64_t n : {100u, 1000u, 10000u}) {
    auto p = base;
    p.scale_index = n;
    const auto c = node_products(encode_shares(0.8, -0.6, d, p));
    const auto m = ideal_coeffs(0.8, -0.6, d, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < 12; ++i) worst = std::max(worst, std::abs(m.evaluate(p.points[i]) - c[i]));
    res.push_back(worst);
  }
  EXPECT_NEAR(res[0] / res[1], 100.0, 15.0);
  EXPECT_NEAR(res[1] / res[2], 100.0, 15.0);
}

TEST(DegreeStructure, ZeroNoiseFitRecoversSecret) {
  for (std::size_t t : {1u, 3u, 5u}) {
    const auto p = make_params(t, 10, chebyshev_points(t + 1));
    const auto shares = encode_shares(-1.3, 0.0, zeros(t), p);
    const auto m = interpolate_coeffs(shares.a_shares, p.points);
    EXPECT_NEAR(m.m[0], -1.3, 1e-14);
    for (std::size_t j = 1; j <= t; ++j) EXPECT_NEAR(m.m[j], 0.0, 1e-13);
  }
}

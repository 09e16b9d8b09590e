#pragma once

// Independent reference implementations for tests. Nothing here calls the
// decoder's own solvers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Monomial coefficients through (x_i, y_i) by a full-pivot LU Vandermonde solve.
inline std::vector<double> vandermonde_solve(std::span<const double> y, std::span<const double> x) {
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd v(m, m);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs(i) = y[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) v(i, j) = std::pow(x[static_cast<std::size_t>(i)], static_cast<double>(j));
  }
  const Eigen::VectorXd c = v.fullPivLu().solve(rhs);
  return {c.data(), c.data() + m};
}

inline double eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> s(k);
  std::iota(s.begin(), s.end(), std::size_t{0});
  while (true) {
    f(s);
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

struct SubsetDecode {
  std::vector<double> coeffs;        // consensus polynomial
  std::vector<std::size_t> agree;    // positions (into x) that lie on it
  std::vector<std::size_t> disagree;
  std::vector<std::size_t> kept;     // node indices, same ranking rule as the decoder
};

// Exhaustive search over all (T+1)-subsets of the selected positions for the
// degree-T polynomial that agrees with the most remaining points. The kept set
// then ranks the agreeing points by prod_{c in disagree} |x - x_c|, descending,
// ties to the lower node index.
inline SubsetDecode brute_force_decode(std::span<const double> y, std::span<const double> x,
                                       std::span<const std::size_t> nodes, std::size_t t,
                                       double tol = 1e-7) {
  const std::size_t m = x.size();
  SubsetDecode best;
  std::size_t best_count = 0;
  for_each_subset(m, t + 1, [&](const std::vector<std::size_t>& s) {
    std::vector<double> xs, ys;
    for (std::size_t i : s) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
    const auto c = vandermonde_solve(ys, xs);
    std::vector<std::size_t> agree, disagree;
    for (std::size_t i = 0; i < m; ++i) {
      const double scale = std::max(1.0, std::abs(y[i]));
      (std::abs(eval(c, x[i]) - y[i]) <= tol * scale ? agree : disagree).push_back(i);
    }
    if (agree.size() > best_count) {
      best_count = agree.size();
      best.coeffs = c;
      best.agree = std::move(agree);
      best.disagree = std::move(disagree);
    }
  });

  std::vector<double> mag(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double p = 1.0;
    for (std::size_t c : best.disagree) p *= std::abs(x[i] - x[c]);
    mag[i] = p;
  }
  std::vector<std::size_t> order = best.agree;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mag[a] != mag[b]) return mag[a] > mag[b];
    return nodes[a] < nodes[b];
  });
  for (std::size_t k = 0; k < std::min(t + 1, order.size()); ++k) best.kept.push_back(nodes[order[k]]);
  std::sort(best.kept.begin(), best.kept.end());
  return best;
}

}  // namespace oracle

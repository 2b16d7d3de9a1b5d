#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pareto/solvers.hpp"

namespace pareto {

namespace {

// Affine minimizer over aff{g_i : i in support}; false if a weight is negative.
bool affine_candidate(std::span<const Vector> g, std::span<const std::size_t> support,
                      std::size_t n, Vector& weights) {
  const std::size_t s = support.size();
  weights.assign(s, 0.0);
  if (s == 1) {
    weights[0] = 1.0;
    return true;
  }
  const Vector& base = g[support[0]];
  Matrix d(n, s - 1);
  Vector rhs(n);
  for (std::size_t r = 0; r < n; ++r) {
    rhs[r] = -base[r];
    for (std::size_t j = 1; j < s; ++j) d(r, j - 1) = g[support[j]][r] - base[r];
  }
  const Vector beta = least_squares_min_norm(d, rhs);
  double rest = 1.0;
  for (std::size_t j = 1; j < s; ++j) {
    weights[j] = beta[j - 1];
    rest -= beta[j - 1];
  }
  weights[0] = rest;
  constexpr double kNegTol = 1e-12;
  double total = 0.0;
  for (double& w : weights) {
    if (w < -kNegTol) return false;
    w = std::max(w, 0.0);
    total += w;
  }
  if (total <= 0.0) return false;
  for (double& w : weights) w /= total;
  return true;
}

bool next_combination(std::vector<std::size_t>& c, std::size_t k) {
  const std::size_t s = c.size();
  for (std::size_t i = s; i-- > 0;) {
    if (c[i] < k - s + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

MinNormResult min_norm_point(std::span<const Vector> g) {
  const std::size_t k = g.size();
  if (k == 0) throw std::invalid_argument("min_norm_point: empty bundle");
  if (k > kMaxMinNormVectors)
    throw std::invalid_argument("min_norm_point: more than " +
                                std::to_string(kMaxMinNormVectors) + " vectors");
  const std::size_t n = g[0].size();
  double scale = 0.0;
  for (const Vector& v : g) {
    if (v.size() != n) throw std::invalid_argument("min_norm_point: ragged bundle");
    scale = std::max(scale, norm2(v));
  }
  const double tie_tol = 1e-14 * std::max(scale, 1e-300);

  MinNormResult best;
  best.omega = std::numeric_limits<double>::infinity();
  Vector weights;
  Vector p(n);
  for (std::size_t s = 1; s <= k; ++s) {
    std::vector<std::size_t> support(s);
    std::iota(support.begin(), support.end(), std::size_t{0});
    do {
      if (!affine_candidate(g, support, n, weights)) continue;
      std::fill(p.begin(), p.end(), 0.0);
      for (std::size_t j = 0; j < s; ++j)
        for (std::size_t r = 0; r < n; ++r) p[r] += weights[j] * g[support[j]][r];
      const double omega = norm2(p);
      if (omega < best.omega - tie_tol) {
        best.omega = omega;
        best.alpha.assign(k, 0.0);
        for (std::size_t j = 0; j < s; ++j) best.alpha[support[j]] = weights[j];
      }
    } while (next_combination(support, k));
    // Nothing later can beat a zero-norm candidate by more than the tie margin.
    if (best.omega <= tie_tol) break;
  }
  for (std::size_t i = 0; i < k; ++i)
    if (best.alpha[i] > 0.0) best.support.push_back(i);
  return best;
}

}  // namespace pareto

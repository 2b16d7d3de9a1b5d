#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "checks.hpp"
#include "pareto/solvers.hpp"

using namespace pareto;

namespace {

void expect_alpha(const Vector& got, const Vector& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << i;
}

// Brute force over basic solutions of {A_eq x = b_eq, A_ineq x + s = b_ineq, x, s >= 0}:
// every choice of m basis columns among the n + m_ineq standard-form columns.
std::optional<double> brute_force_lp(const Vector& c, const Matrix& a_eq, const Vector& b_eq,
                                     const Matrix& a_ineq, const Vector& b_ineq) {
  const std::size_t n = c.size();
  const std::size_t me = a_eq.rows(), mi = a_ineq.rows(), m = me + mi;
  const std::size_t cols = n + mi;
  Matrix a(m, cols);
  Vector b(m);
  for (std::size_t r = 0; r < me; ++r) {
    for (std::size_t j = 0; j < n; ++j) a(r, j) = a_eq(r, j);
    b[r] = b_eq[r];
  }
  for (std::size_t r = 0; r < mi; ++r) {
    for (std::size_t j = 0; j < n; ++j) a(me + r, j) = a_ineq(r, j);
    a(me + r, n + r) = 1.0;
    b[me + r] = b_ineq[r];
  }
  std::optional<double> best;
  std::vector<bool> pick(cols, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(std::min(m, cols)), true);
  do {
    std::vector<std::size_t> basis;
    for (std::size_t j = 0; j < cols; ++j)
      if (pick[j]) basis.push_back(j);
    Matrix sub(m, basis.size());
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t j = 0; j < basis.size(); ++j) sub(r, j) = a(r, basis[j]);
    if (rank(sub, 1e-10) < basis.size()) continue;
    const Vector xb = least_squares_min_norm(sub, b, 1e-10);
    Vector res = sub * xb;
    bool ok = true;
    for (std::size_t r = 0; r < m; ++r) ok = ok && std::abs(res[r] - b[r]) <= 1e-9;
    for (double v : xb) ok = ok && v >= -1e-9;
    if (!ok) continue;
    double obj = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (basis[j] < n) obj += c[basis[j]] * xb[j];
    if (!best || obj > *best) best = obj;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

TEST(MinNorm, TriangleInterior) {
  const std::vector<Vector> g{{-2, 2}, {0, -2}, {2, 2}};
  const MinNormResult r = min_norm_point(g);
  EXPECT_NEAR(r.omega, 0.0, 1e-12);
  expect_alpha(r.alpha, {0.25, 0.5, 0.25}, 1e-12);
  EXPECT_NEAR(checks::grid_min_norm(g, 1e-3), 0.0, 2e-3);
}

TEST(MinNorm, TriangleBoundary) {
  const std::vector<Vector> g{{-2, 0}, {0, -4}, {2, 0}};
  const MinNormResult r = min_norm_point(g);
  EXPECT_NEAR(r.omega, 0.0, 1e-12);
  expect_alpha(r.alpha, {0.5, 0.0, 0.5}, 1e-12);
  EXPECT_EQ(r.support, (std::vector<std::size_t>{0, 2}));
  EXPECT_NEAR(checks::grid_min_norm(g, 1e-3), 0.0, 2e-3);
}

TEST(MinNorm, TriangleOutside) {
  const std::vector<Vector> g{{4, 2}, {6, -2}, {8, 2}};
  const MinNormResult r = min_norm_point(g);
  EXPECT_NEAR(r.omega, 2 * std::sqrt(5.0), 1e-12);
  expect_alpha(r.alpha, {1, 0, 0}, 1e-12);
  EXPECT_NEAR(checks::grid_min_norm(g, 1e-3), r.omega, 2e-3);
}

TEST(MinNorm, SingleZeroGradient) {
  const std::vector<Vector> g{{0, 0}};
  const MinNormResult r = min_norm_point(g);
  EXPECT_EQ(r.omega, 0.0);
  EXPECT_EQ(r.alpha, (Vector{1.0}));
}

TEST(MinNorm, RejectsBadSizes) {
  EXPECT_THROW(min_norm_point(std::vector<Vector>{}), std::invalid_argument);
  EXPECT_THROW(min_norm_point(std::vector<Vector>(13, Vector{1.0})), std::invalid_argument);
}

TEST(MinNorm, MatchesGridOracle) {
  checks::Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + t % 4, n = 1 + (t / 4) % 3;
    const auto g = checks::random_bundle(rng, k, n, t % 3 == 0);
    const MinNormResult r = min_norm_point(g);
    EXPECT_LE(std::abs(r.omega - checks::grid_min_norm(g, 1e-3)), 2e-3);
    // Reported omega is the norm of the reported combination.
    Vector s(n, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) s[j] += r.alpha[i] * g[i][j];
    EXPECT_NEAR(norm2(s), r.omega, 1e-10);
    EXPECT_NEAR(std::accumulate(r.alpha.begin(), r.alpha.end(), 0.0), 1.0, 1e-12);
    for (double a : r.alpha) EXPECT_GE(a, 0.0);
  }
}

TEST(MinNorm, PermutationInvariant) {
  checks::Rng rng(37);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + t % 4, n = 1 + (t / 4) % 3;
    const auto g = checks::random_bundle(rng, k, n, t % 2 == 0);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Vector> h(k);
    for (std::size_t i = 0; i < k; ++i) h[i] = g[perm[i]];
    const MinNormResult a = min_norm_point(g), b = min_norm_point(h);
    EXPECT_NEAR(a.omega, b.omega, 1e-9);
    // The argmin is unique when the vectors are affinely independent.
    if (k <= n + 1) {
      for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(b.alpha[i], a.alpha[perm[i]], 1e-9);
    }
  }
}

TEST(MinNorm, ZeroIffLpFeasibleOnFixtures) {
  checks::Rng rng(41);
  for (const auto& f : checks::fixtures()) {
    const Problem p = checks::load_fixture(f.name);
    for (int t = 0; t < 50; ++t) {
      const auto g = p.gradients(checks::random_point(rng, f.window));
      EXPECT_EQ(min_norm_point(g).omega <= 1e-12, checks::lp_critical(g)) << f.name;
    }
  }
  // Known critical and noncritical bundles.
  EXPECT_TRUE(checks::lp_critical(std::vector<Vector>{{-2, 2}, {0, -2}, {2, 2}}));
  EXPECT_FALSE(checks::lp_critical(std::vector<Vector>{{4, 2}, {6, -2}, {8, 2}}));
}

TEST(Lp, Examples) {
  // maximize t with alpha1 = 1, t - alpha1 <= 0.
  {
    const LpResult r = lp_solve(Vector{0, 1}, Matrix{{1, 0}}, Vector{1}, Matrix{{-1, 1}}, Vector{0});
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_NEAR(r.objective, 1.0, 1e-12);
  }
  {
    const LpResult r = lp_solve(Vector{1}, Matrix(0, 1), Vector{}, Matrix{{1}}, Vector{3});
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_NEAR(r.objective, 3.0, 1e-12);
  }
  {
    const LpResult r = lp_solve(Vector{1}, Matrix(0, 1), Vector{}, Matrix(0, 1), Vector{});
    EXPECT_EQ(r.status, LpStatus::Unbounded);
  }
  {
    const LpResult r = lp_solve(Vector{1}, Matrix{{1}}, Vector{-1}, Matrix(0, 1), Vector{});
    EXPECT_EQ(r.status, LpStatus::Infeasible);
  }
  EXPECT_THROW(lp_solve(Vector{1, 2}, Matrix{{1}}, Vector{1}, Matrix(0, 2), Vector{}),
               std::invalid_argument);
}

TEST(Lp, InteriorMultiplierAtTriangleCentre) {
  // Variables (a1, a2, a3, t); sum a = 1, Df^T a = 0, t <= a_i.
  const Matrix a_eq{{1, 1, 1, 0}, {-2, 0, 2, 0}, {2, -2, 2, 0}};
  const Matrix a_ineq{{-1, 0, 0, 1}, {0, -1, 0, 1}, {0, 0, -1, 1}};
  const LpResult r = lp_solve(Vector{0, 0, 0, 1}, a_eq, Vector{1, 0, 0}, a_ineq, Vector{0, 0, 0});
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 0.25, 1e-12);
}

TEST(Lp, MatchesBasicSolutionEnumeration) {
  checks::Rng rng(43);
  int optimal = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 4;
    const std::size_t me = t % 2, mi = 1 + (t / 2) % 2;
    Vector c(n);
    for (double& v : c) v = checks::uniform(rng, -1, 1);
    Matrix a_eq(me, n), a_ineq(mi, n);
    Vector b_eq(me), b_ineq(mi);
    for (std::size_t r = 0; r < me; ++r) {
      for (std::size_t j = 0; j < n; ++j) a_eq(r, j) = checks::uniform(rng, 0, 1);
      b_eq[r] = checks::uniform(rng, 0, 1);
    }
    for (std::size_t r = 0; r < mi; ++r) {
      for (std::size_t j = 0; j < n; ++j) a_ineq(r, j) = checks::uniform(rng, -0.2, 1);
      b_ineq[r] = checks::uniform(rng, -0.2, 1);
    }
    const LpResult r = lp_solve(c, a_eq, b_eq, a_ineq, b_ineq);
    const auto brute = brute_force_lp(c, a_eq, b_eq, a_ineq, b_ineq);
    if (!brute) {
      EXPECT_EQ(r.status, LpStatus::Infeasible) << t;
      continue;
    }
    if (r.status == LpStatus::Unbounded) continue;  // brute force only sees vertices
    ASSERT_EQ(r.status, LpStatus::Optimal) << t;
    EXPECT_NEAR(r.objective, *brute, 1e-9) << t;
    for (std::size_t i = 0; i < me; ++i)
      EXPECT_NEAR(dot(a_eq.row(i), r.solution), b_eq[i], 1e-9);
    for (std::size_t i = 0; i < mi; ++i) EXPECT_LE(dot(a_ineq.row(i), r.solution), b_ineq[i] + 1e-9);
    for (double v : r.solution) EXPECT_GE(v, -1e-9);
    ++optimal;
  }
  EXPECT_GT(optimal, 50);
}

#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "pareto/report.hpp"
#include "pareto/solvers.hpp"

#ifndef PARETO_PROBLEMS_DIR
#define PARETO_PROBLEMS_DIR "problems"
#endif

namespace pareto::checks {

namespace {

std::string g_problems_dir = PARETO_PROBLEMS_DIR;

}  // namespace

void set_problems_dir(const std::string& dir) { g_problems_dir = dir; }

std::string problems_dir() { return g_problems_dir; }

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> list = [] {
    const GridSpec standard = GridSpec::uniform(2, -2.0, 2.0, 0.05);
    return std::vector<Fixture>{
        {"triangle", standard},
        {"nonmanifold", standard},
        {"isolated_points", GridSpec::uniform(2, -0.5, 2.5, 0.05)},
        {"cross", standard},
        {"triangle4", standard},
        {"square", standard},
        {"regular4", GridSpec::uniform(2, -0.5, 1.5, 0.05)},
        {"irregular4", standard},
        {"disconnected", GridSpec::uniform(2, -3.0, 3.0, 0.05)},
        {"paraboloid", standard},
    };
  }();
  return list;
}

const Fixture& fixture(const std::string& name) {
  for (const Fixture& f : fixtures())
    if (f.name == name) return f;
  throw std::invalid_argument("unknown fixture " + name);
}

Problem load_fixture(const std::string& name) {
  return load_problem(problems_dir() + "/" + name + ".mop");
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector random_point(Rng& rng, const GridSpec& window) {
  Vector x(window.dim());
  for (std::size_t d = 0; d < x.size(); ++d) x[d] = uniform(rng, window.lo[d], window.hi[d]);
  return x;
}

std::vector<Vector> random_bundle(Rng& rng, std::size_t k, std::size_t n, bool critical) {
  std::vector<Vector> g(k, Vector(n));
  for (Vector& v : g)
    for (double& e : v) e = uniform(rng, -1.0, 1.0);
  if (critical && k >= 2) {
    Vector a(k);
    for (double& w : a) w = uniform(rng, 0.1, 1.0);
    const double total = std::accumulate(a.begin(), a.end(), 0.0);
    for (double& w : a) w /= total;
    // g_k = -(sum_{i<k} a_i g_i) / a_k, rescaled into [-1, 1] together with the rest.
    Vector last(n, 0.0);
    for (std::size_t i = 0; i + 1 < k; ++i)
      for (std::size_t r = 0; r < n; ++r) last[r] -= a[i] * g[i][r] / a[k - 1];
    double big = 1.0;
    for (double e : last) big = std::max(big, std::abs(e));
    for (Vector& v : g)
      for (double& e : v) e /= big;
    for (std::size_t r = 0; r < n; ++r) g[k - 1][r] = last[r] / big;
  } else if (critical) {
    std::fill(g[0].begin(), g[0].end(), 0.0);
  }
  return g;
}

Problem random_quadratic_problem(Rng& rng, std::size_t k) {
  std::vector<Expr> objectives;
  for (std::size_t i = 0; i < k; ++i) {
    const double c1 = uniform(rng, -1.0, 1.0);
    const double c2 = uniform(rng, -1.0, 1.0);
    const double p = uniform(rng, 0.5, 2.0);
    const double r = uniform(rng, 0.5, 2.0);
    const double q = uniform(rng, -0.4, 0.4) * std::min(p, r);
    const std::string u = "(x1 - (" + format_double(c1) + "))";
    const std::string v = "(x2 - (" + format_double(c2) + "))";
    const std::string text = format_double(p) + "*" + u + "^2 + " + format_double(2 * q) + "*" + u +
                              "*" + v + " + " + format_double(r) + "*" + v + "^2";
    objectives.push_back(parse_expression(text, 2));
  }
  return Problem(2, std::move(objectives), "random_quadratic");
}

double grid_min_norm(std::span<const Vector> g, double step) {
  const std::size_t k = g.size();
  const std::size_t n = g[0].size();
  const long m = std::lround(1.0 / step);
  if (k == 1) return norm2(g[0]);

  double best = std::numeric_limits<double>::infinity();
  const std::size_t free = k - 2;  // prefix weights enumerated explicitly
  std::vector<long> a(free, 0);
  Vector prefix(n), u(n), d(n), v(n);
  for (std::size_t r = 0; r < n; ++r) d[r] = g[k - 2][r] - g[k - 1][r];
  const double dd = dot(d, d);
  for (;;) {
    long used = std::accumulate(a.begin(), a.end(), 0L);
    if (used <= m) {
      std::fill(prefix.begin(), prefix.end(), 0.0);
      for (std::size_t i = 0; i < free; ++i)
        for (std::size_t r = 0; r < n; ++r)
          prefix[r] += static_cast<double>(a[i]) / static_cast<double>(m) * g[i][r];
      const long rest = m - used;
      // v(j) = prefix + (j/m) g_{k-1} + ((rest - j)/m) g_k for j = 0..rest.
      for (std::size_t r = 0; r < n; ++r)
        u[r] = prefix[r] + static_cast<double>(rest) / static_cast<double>(m) * g[k - 1][r];
      double jstar = 0.0;
      if (dd > 0.0) jstar = -dot(u, d) / dd * static_cast<double>(m);
      jstar = std::clamp(jstar, 0.0, static_cast<double>(rest));
      const long lo = static_cast<long>(std::floor(jstar));
      for (long j : {lo, std::min(lo + 1, rest)}) {
        for (std::size_t r = 0; r < n; ++r)
          v[r] = u[r] + static_cast<double>(j) / static_cast<double>(m) * d[r];
        best = std::min(best, norm2(v));
      }
    }
    // Advance the prefix odometer.
    std::size_t i = 0;
    for (; i < free; ++i) {
      ++a[i];
      if (std::accumulate(a.begin(), a.end(), 0L) <= m) break;
      a[i] = 0;
    }
    if (i == free) break;
  }
  return best;
}

bool lp_critical(std::span<const Vector> g) {
  const std::size_t k = g.size();
  const std::size_t n = g[0].size();
  Matrix a_eq(n + 1, k, 1.0);
  Vector b_eq(n + 1, 0.0);
  b_eq[n] = 1.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < k; ++i) a_eq(r, i) = g[i][r];
  const Vector c(k, 0.0);
  return lp_solve(c, a_eq, b_eq, Matrix(0, k), {}).status == LpStatus::Optimal;
}

AdError ad_error(const Problem& p, std::span<const double> x) {
  AdError err;
  const std::size_t n = p.dim();
  const double hg = 1e-5;
  const double hh = 1e-4;
  Vector y(x.begin(), x.end());
  for (std::size_t i = 0; i < p.num_objectives(); ++i) {
    const Vector g = p.gradient(i, x);
    const Matrix h = p.hessian(i, x);
    auto f = [&](const Vector& z) { return p.value(i, z); };
    for (std::size_t a = 0; a < n; ++a) {
      y[a] = x[a] + hg;
      const double fp = f(y);
      y[a] = x[a] - hg;
      const double fm = f(y);
      y[a] = x[a];
      const double fd = (fp - fm) / (2 * hg);
      err.gradient = std::max(err.gradient, std::abs(g[a] - fd) / std::max(1.0, std::abs(g[a])));
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        double fd;
        if (a == b) {
          const double f0 = f(y);
          y[a] = x[a] + hh;
          const double fp = f(y);
          y[a] = x[a] - hh;
          const double fm = f(y);
          y[a] = x[a];
          fd = (fp - 2 * f0 + fm) / (hh * hh);
        } else {
          double s[2][2];
          for (int sa = 0; sa < 2; ++sa)
            for (int sb = 0; sb < 2; ++sb) {
              y[a] = x[a] + (sa ? hh : -hh);
              y[b] = x[b] + (sb ? hh : -hh);
              s[sa][sb] = f(y);
            }
          y[a] = x[a];
          y[b] = x[b];
          fd = (s[1][1] - s[1][0] - s[0][1] + s[0][0]) / (4 * hh * hh);
        }
        err.hessian =
            std::max(err.hessian, std::abs(h(a, b) - fd) / std::max(1.0, std::abs(h(a, b))));
      }
    }
  }
  return err;
}

double segment_distance(std::span<const double> x, std::span<const double> a,
                        std::span<const double> b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(x[0] - a[0] - t * dx, x[1] - a[1] - t * dy);
}

double polygon_distance(std::span<const double> x, const std::vector<Vector>& v) {
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vector& a = v[i];
    const Vector& b = v[(i + 1) % v.size()];
    const double cross = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
    if (cross < 0) inside = false;
    best = std::min(best, segment_distance(x, a, b));
  }
  return inside ? 0.0 : best;
}

std::vector<Vector> sample_polygon(const std::vector<Vector>& v, double h) {
  double lo0 = v[0][0], hi0 = v[0][0], lo1 = v[0][1], hi1 = v[0][1];
  for (const Vector& p : v) {
    lo0 = std::min(lo0, p[0]);
    hi0 = std::max(hi0, p[0]);
    lo1 = std::min(lo1, p[1]);
    hi1 = std::max(hi1, p[1]);
  }
  std::vector<Vector> out;
  for (double a = lo0; a <= hi0 + 1e-12; a += h)
    for (double b = lo1; b <= hi1 + 1e-12; b += h) {
      const Vector p{a, b};
      if (polygon_distance(p, v) == 0.0) out.push_back(p);
    }
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto edge = sample_segment(v[i], v[(i + 1) % v.size()], h);
    out.insert(out.end(), edge.begin(), edge.end());
  }
  return out;
}

std::vector<Vector> sample_segment(const Vector& a, const Vector& b, double h) {
  const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
  const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / h)));
  std::vector<Vector> out;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps);
    out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
  }
  return out;
}

std::vector<std::size_t> missing_nodes(const ScanResult& sub, const ScanResult& full) {
  const std::set<std::size_t> have(full.nodes.begin(), full.nodes.end());
  std::vector<std::size_t> out;
  for (std::size_t node : sub.nodes)
    if (!have.count(node)) out.push_back(node);
  return out;
}

std::size_t bridged_component_count(const ScanResult& scan, std::span<const Vector> extra) {
  std::vector<Vector> pts = coordinates(scan);
  pts.insert(pts.end(), extra.begin(), extra.end());
  const double reach = 1.5 * scan.grid.step;
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double cheb = 0.0;
      for (std::size_t d = 0; d < pts[i].size(); ++d)
        cheb = std::max(cheb, std::abs(pts[i][d] - pts[j][d]));
      if (cheb <= reach) parent[find(i)] = find(j);
    }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) roots += find(i) == i;
  return roots;
}

std::size_t rank_duality_violations(const ScanResult& scan, std::size_t k) {
  std::size_t bad = 0;
  for (const PointDiagnostics& d : scan.points) {
    const bool full_rank = d.jac_rank == static_cast<int>(k) - 1;
    const bool unique = d.multiplier_dim == 0;
    if (full_rank != unique) ++bad;
  }
  return bad;
}

namespace {

void report(std::ostream& out, bool ok, const std::string& name, const std::string& detail,
            bool& all) {
  out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  all = all && ok;
}

}  // namespace

bool run_selftest(const SelftestOptions& opt, std::ostream& out) {
  bool all = true;
  Rng rng(opt.seed);

  // Automatic differentiation against finite differences.
  {
    AdError worst;
    for (const Fixture& f : fixtures()) {
      const Problem p = load_fixture(f.name);
      for (int i = 0; i < opt.ad_points; ++i) {
        const AdError e = ad_error(p, random_point(rng, f.window));
        worst.gradient = std::max(worst.gradient, e.gradient);
        worst.hessian = std::max(worst.hessian, e.hessian);
      }
    }
    report(out, worst.gradient <= 1e-6 && worst.hessian <= 1e-4, "ad-finite-differences",
           "gradient " + format_double(worst.gradient) + ", hessian " + format_double(worst.hessian),
           all);
  }

  // Min-norm point against the simplex grid and the LP.
  {
    double worst = 0.0;
    int disagreements = 0;
    double perm_worst = 0.0;
    for (int b = 0; b < opt.bundles; ++b) {
      const std::size_t k = 1 + rng() % 4;
      const std::size_t n = 1 + rng() % 3;
      const auto g = random_bundle(rng, k, n, b % 2 == 0);
      const MinNormResult mn = min_norm_point(g);
      worst = std::max(worst, std::abs(mn.omega - grid_min_norm(g, 1e-3)));
      const bool mn_critical = mn.omega <= 1e-9 * criticality_scale(g);
      if (mn_critical != lp_critical(g)) ++disagreements;
      std::vector<std::size_t> perm(k);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<Vector> shuffled;
      for (std::size_t i : perm) shuffled.push_back(g[i]);
      perm_worst = std::max(perm_worst, std::abs(min_norm_point(shuffled).omega - mn.omega));
    }
    report(out, worst <= 2e-3, "min-norm-vs-grid", "max deviation " + format_double(worst), all);
    report(out, disagreements == 0, "min-norm-vs-lp",
           std::to_string(disagreements) + " disagreements", all);
    report(out, perm_worst <= 1e-9, "min-norm-permutation",
           "max omega change " + format_double(perm_worst), all);
  }

  // Reduced residual agrees with the full residual under the lift.
  {
    const Problem p = load_fixture("triangle4");
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vector x = random_point(rng, fixture("triangle4").window);
      Vector a(4);
      for (double& w : a) w = uniform(rng, 0.0, 1.0);
      const double total = std::accumulate(a.begin(), a.end(), 0.0);
      for (double& w : a) w /= total;
      const Vector reduced(a.begin(), a.end() - 1);
      Vector full = reduced;
      full.push_back(1.0 - std::accumulate(reduced.begin(), reduced.end(), 0.0));
      const Vector r1 = residual_F(p, x, full);
      const Vector r2 = residual_Ftilde(p, x, reduced);
      for (std::size_t j = 0; j < 2; ++j) worst = std::max(worst, std::abs(r1[j] - r2[j]));
    }
    report(out, worst <= 1e-12, "lifted-residual", "max difference " + format_double(worst), all);
  }

  // Subproblem critical sets lie in the full critical set.
  {
    std::size_t violations = 0;
    std::size_t checked = 0;
    ScanConfig sc;
    sc.jobs = opt.jobs;
    const GridSpec window = GridSpec::uniform(2, -2.0, 2.0, 0.1);
    for (int t = 0; t < opt.random_problems; ++t) {
      const Problem p = random_quadratic_problem(rng, 2 + rng() % 3);
      const ScanResult full = grid_scan(p, window, sc);
      for (const SubproblemId& id : all_subsets(p.num_objectives())) {
        const ScanResult sub = grid_scan(subproblem(p, id), window, sc);
        checked += sub.points.size();
        violations += missing_nodes(sub, full).size();
      }
    }
    report(out, violations == 0, "subproblem-containment",
           std::to_string(violations) + " of " + std::to_string(checked) + " nodes", all);
  }

  // Rank and multiplier uniqueness agree on the fixtures.
  {
    std::size_t violations = 0;
    std::size_t checked = 0;
    ScanConfig sc;
    sc.jobs = opt.jobs;
    for (const char* name : {"triangle", "cross", "triangle4", "square"}) {
      const Problem p = load_fixture(name);
      GridSpec w = fixture(name).window;
      w.step = 0.1;
      const ScanResult s = grid_scan(p, w, sc);
      checked += s.points.size();
      violations += rank_duality_violations(s, p.num_objectives());
    }
    report(out, violations == 0, "rank-multiplier-duality",
           std::to_string(violations) + " of " + std::to_string(checked) + " points", all);
  }
  return all;
}

}  // namespace pareto::checks

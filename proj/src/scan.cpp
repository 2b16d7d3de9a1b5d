#include "pareto/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "parallel.hpp"

namespace pareto {

GridSpec::GridSpec(Vector lo_, Vector hi_, double step_)
    : lo(std::move(lo_)), hi(std::move(hi_)), step(step_) {}

GridSpec GridSpec::uniform(std::size_t dim, double lo, double hi, double step) {
  return GridSpec(Vector(dim, lo), Vector(dim, hi), step);
}

std::size_t GridSpec::count(std::size_t d) const {
  const double span = (hi[d] - lo[d]) / step;
  return static_cast<std::size_t>(std::floor(span * (1.0 + 1e-12) + 1e-9)) + 1;
}

std::size_t GridSpec::total() const {
  std::size_t t = 1;
  for (std::size_t d = 0; d < dim(); ++d) {
    const std::size_t c = count(d);
    if (t > std::numeric_limits<std::size_t>::max() / c) return std::numeric_limits<std::size_t>::max();
    t *= c;
  }
  return t;
}

std::vector<std::size_t> GridSpec::multi_index(std::size_t flat) const {
  std::vector<std::size_t> m(dim());
  for (std::size_t d = dim(); d-- > 0;) {
    const std::size_t c = count(d);
    m[d] = flat % c;
    flat /= c;
  }
  return m;
}

std::size_t GridSpec::flat_index(std::span<const std::size_t> multi) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < dim(); ++d) flat = flat * count(d) + multi[d];
  return flat;
}

Vector GridSpec::node(std::size_t flat) const {
  const auto m = multi_index(flat);
  Vector x(dim());
  for (std::size_t d = 0; d < dim(); ++d) x[d] = lo[d] + static_cast<double>(m[d]) * step;
  return x;
}

double GridSpec::diameter() const {
  double s = 0.0;
  for (std::size_t d = 0; d < dim(); ++d) s += (hi[d] - lo[d]) * (hi[d] - lo[d]);
  return std::sqrt(s);
}

bool GridSpec::contains(std::span<const double> x, double slack) const {
  for (std::size_t d = 0; d < dim(); ++d)
    if (x[d] < lo[d] - slack || x[d] > hi[d] + slack) return false;
  return true;
}

void GridSpec::validate(std::size_t cap) const {
  if (dim() == 0 || lo.size() != hi.size())
    throw std::invalid_argument("grid: ranges must be given for every coordinate");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("grid: step must be positive");
  for (std::size_t d = 0; d < dim(); ++d)
    if (!(lo[d] < hi[d]) || !std::isfinite(lo[d]) || !std::isfinite(hi[d]))
      throw std::invalid_argument("grid: each range needs lo < hi");
  if (total() > cap)
    throw GridCapExceeded("grid: " + std::to_string(total()) + " nodes exceed the cap of " +
                          std::to_string(cap));
}

std::uint64_t problem_hash(const Problem& p) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : p.render()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ScanResult grid_scan(const Problem& p, const GridSpec& grid, const ScanConfig& cfg) {
  cfg.tol.validate();
  grid.validate(cfg.grid_cap);
  if (grid.dim() != p.dim()) throw std::invalid_argument("grid_scan: window dimension mismatch");

  const std::size_t total = grid.total();
  const std::size_t chunks = detail::chunk_count(total, cfg.jobs);
  std::vector<std::vector<PointDiagnostics>> found(chunks);
  std::vector<std::vector<std::size_t>> found_nodes(chunks);
  detail::parallel_chunks(total, cfg.jobs, [&](std::size_t begin, std::size_t end, std::size_t c) {
    for (std::size_t i = begin; i < end; ++i) {
      const Vector x = grid.node(i);
      PointDiagnostics d = diagnose(p, x, cfg.tol);
      if (!d.critical()) continue;
      found[c].push_back(std::move(d));
      found_nodes[c].push_back(i);
    }
  });

  ScanResult result;
  result.grid = grid;
  result.tol = cfg.tol;
  result.problem_hash = problem_hash(p);
  for (std::size_t c = 0; c < chunks; ++c) {
    std::move(found[c].begin(), found[c].end(), std::back_inserter(result.points));
    result.nodes.insert(result.nodes.end(), found_nodes[c].begin(), found_nodes[c].end());
  }
  return result;
}

std::vector<Vector> reduced_simplex_nodes(std::size_t k, double simplex_step) {
  if (k < 2) throw std::invalid_argument("simplex nodes: need k >= 2");
  if (!(simplex_step > 0.0) || simplex_step >= 1.0)
    throw std::invalid_argument("simplex nodes: step must be in (0, 1)");
  const std::size_t dim = k - 1;
  const double s = simplex_step;
  const double margin = 0.5 * s - 1e-12;
  std::vector<Vector> out;
  std::vector<std::size_t> idx(dim, 0);
  auto coord = [&](std::size_t i) { return 0.5 * s + static_cast<double>(i) * s; };
  // Odometer over idx with the last coordinate fastest; prune once the sum is too large.
  for (;;) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) sum += coord(idx[j]);
    if (1.0 - sum >= margin) {
      Vector a(dim);
      for (std::size_t j = 0; j < dim; ++j) a[j] = coord(idx[j]);
      out.push_back(std::move(a));
      ++idx[dim - 1];
      continue;
    }
    // Carry: reset the trailing coordinate and advance the previous one.
    std::size_t j = dim - 1;
    for (;;) {
      idx[j] = 0;
      if (j == 0) return out;
      --j;
      ++idx[j];
      double prefix = 0.0;
      for (std::size_t q = 0; q <= j; ++q) prefix += coord(idx[q]);
      prefix += static_cast<double>(dim - 1 - j) * coord(0);
      if (1.0 - prefix >= margin) break;
    }
  }
}

namespace {

enum class NewtonStatus { Converged, Failed, Singular };

struct NewtonOutcome {
  NewtonStatus status;
  Vector x;
  int iterations;
};

NewtonOutcome newton(const Problem& p, std::span<const double> alpha, Vector x,
                     const TraceConfig& cfg, double max_step) {
  for (int it = 0; it <= cfg.max_iterations; ++it) {
    Vector r;
    try {
      r = residual_Ftilde(p, x, alpha);
    } catch (const EvaluationError&) {
      return {NewtonStatus::Failed, std::move(x), it};
    }
    if (norm2(r) <= cfg.newton_tol) return {NewtonStatus::Converged, std::move(x), it};
    if (it == cfg.max_iterations) break;
    Vector dx;
    try {
      dx = solve(d_x_Ftilde(p, x, alpha), r, cfg.tol.rank_rtol);
    } catch (const SingularMatrixError&) {
      return {NewtonStatus::Singular, std::move(x), it};
    } catch (const EvaluationError&) {
      return {NewtonStatus::Failed, std::move(x), it};
    }
    if (!(norm2(dx) <= max_step)) return {NewtonStatus::Failed, std::move(x), it + 1};
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dx[i];
  }
  return {NewtonStatus::Failed, std::move(x), cfg.max_iterations};
}

std::vector<Vector> coarse_seeds(const GridSpec& window, std::size_t per_dim) {
  per_dim = std::max<std::size_t>(per_dim, 1);
  const std::size_t n = window.dim();
  std::size_t total = 1;
  for (std::size_t d = 0; d < n; ++d) total *= per_dim;
  std::vector<Vector> seeds;
  seeds.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vector x(n);
    std::size_t rest = flat;
    for (std::size_t d = n; d-- > 0;) {
      const std::size_t i = rest % per_dim;
      rest /= per_dim;
      const double t = per_dim == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(per_dim - 1);
      x[d] = window.lo[d] + t * (window.hi[d] - window.lo[d]);
    }
    seeds.push_back(std::move(x));
  }
  return seeds;
}

}  // namespace

TraceResult trace_manifold(const Problem& p, const GridSpec& window, double simplex_step,
                           std::span<const Vector> seeds, const TraceConfig& cfg) {
  const std::size_t k = p.num_objectives();
  if (k < 2) throw std::invalid_argument("trace requires k >= 2");
  cfg.tol.validate();
  if (window.dim() != p.dim()) throw std::invalid_argument("trace: window dimension mismatch");
  window.validate(std::numeric_limits<std::size_t>::max());

  const std::vector<Vector> nodes = reduced_simplex_nodes(k, simplex_step);
  const std::vector<Vector> base_seeds =
      seeds.empty() ? coarse_seeds(window, cfg.coarse_seeds_per_dim)
                    : std::vector<Vector>(seeds.begin(), seeds.end());
  for (const Vector& s : base_seeds)
    if (s.size() != p.dim()) throw std::invalid_argument("trace: seed has wrong dimension");
  const double max_step = 10.0 * window.diameter();

  // Lines: maximal runs of nodes sharing all but the last reduced coordinate.
  std::vector<std::size_t> line_start;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (i == 0 || !std::equal(nodes[i].begin(), nodes[i].end() - 1, nodes[i - 1].begin()))
      line_start.push_back(i);
  line_start.push_back(nodes.size());
  const std::size_t lines = line_start.size() - 1;

  std::vector<std::vector<TracePoint>> per_node(nodes.size());
  detail::parallel_chunks(lines, cfg.jobs, [&](std::size_t lb, std::size_t le, std::size_t) {
    for (std::size_t line = lb; line < le; ++line) {
      std::vector<Vector> previous;
      for (std::size_t ni = line_start[line]; ni < line_start[line + 1]; ++ni) {
        const Vector& alpha = nodes[ni];
        std::vector<TracePoint>& out = per_node[ni];
        std::vector<Vector> accepted;
        bool failed_recorded = false;
        bool singular_recorded = false;
        auto attempt = [&](const Vector& seed) {
          NewtonOutcome r = newton(p, alpha, seed, cfg, max_step);
          TracePoint tp{alpha, std::move(r.x), false, r.iterations, false};
          if (r.status == NewtonStatus::Converged) {
            if (!window.contains(tp.x, 1e-9)) return;
            for (const Vector& a : accepted) {
              double d2 = 0.0;
              for (std::size_t q = 0; q < a.size(); ++q) d2 += (a[q] - tp.x[q]) * (a[q] - tp.x[q]);
              if (std::sqrt(d2) <= cfg.dedup_radius) return;
            }
            tp.converged = true;
            tp.degenerate = is_degenerate(p, tp.x, alpha, cfg.tol.rank_rtol);
            accepted.push_back(tp.x);
            out.push_back(std::move(tp));
          } else if (r.status == NewtonStatus::Singular) {
            if (singular_recorded) return;
            singular_recorded = true;
            tp.degenerate = true;
            out.push_back(std::move(tp));
          } else {
            if (failed_recorded) return;
            failed_recorded = true;
            out.push_back(std::move(tp));
          }
        };
        for (const Vector& s : previous) attempt(s);
        for (const Vector& s : base_seeds) attempt(s);
        previous = accepted;
      }
    }
  });

  TraceResult result;
  result.simplex_step = simplex_step;
  for (auto& v : per_node) std::move(v.begin(), v.end(), std::back_inserter(result.points));
  return result;
}

std::vector<std::vector<std::size_t>> connected_components(const ScanResult& result) {
  const std::size_t count = result.points.size();
  if (count == 0) return {};
  const GridSpec& g = result.grid;
  const std::size_t n = g.dim();
  std::unordered_map<std::size_t, std::size_t> where;
  for (std::size_t i = 0; i < count; ++i) where.emplace(result.nodes[i], i);

  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  std::size_t offsets = 1;
  for (std::size_t d = 0; d < n; ++d) offsets *= 3;
  std::vector<std::size_t> nb(n);
  for (std::size_t i = 0; i < count; ++i) {
    const auto m = g.multi_index(result.nodes[i]);
    for (std::size_t o = 0; o < offsets; ++o) {
      std::size_t rest = o;
      bool inside = true;
      for (std::size_t d = 0; d < n; ++d) {
        const int delta = static_cast<int>(rest % 3) - 1;
        rest /= 3;
        if ((delta < 0 && m[d] == 0) || (delta > 0 && m[d] + 1 >= g.count(d))) {
          inside = false;
          break;
        }
        nb[d] = static_cast<std::size_t>(static_cast<long long>(m[d]) + delta);
      }
      if (!inside) continue;
      const auto it = where.find(g.flat_index(nb));
      if (it != where.end()) unite(i, it->second);
    }
  }

  std::vector<std::vector<std::size_t>> comps;
  std::unordered_map<std::size_t, std::size_t> comp_of_root;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t r = find(i);
    auto [it, inserted] = comp_of_root.emplace(r, comps.size());
    if (inserted) comps.emplace_back();
    comps[it->second].push_back(i);
  }
  return comps;
}

double directed_hausdorff(std::span<const Vector> a, std::span<const Vector> b) {
  if (a.empty()) return 0.0;
  if (b.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Vector& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& q : b) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
      best = std::min(best, d2);
      if (best <= worst * worst) break;
    }
    worst = std::max(worst, std::sqrt(best));
  }
  return worst;
}

double hausdorff(std::span<const Vector> a, std::span<const Vector> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<Vector> coordinates(const ScanResult& result) {
  std::vector<Vector> out;
  out.reserve(result.points.size());
  for (const auto& d : result.points) out.push_back(d.x);
  return out;
}

}  // namespace pareto

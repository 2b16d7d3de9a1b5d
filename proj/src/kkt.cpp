#include "pareto/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pareto/solvers.hpp"

namespace pareto {

namespace {

void check_sizes(const Problem& p, std::span<const double> x, std::size_t alpha_size,
                 std::size_t expected, const char* what) {
  if (x.size() != p.dim())
    throw std::invalid_argument(std::string(what) + ": point has wrong dimension");
  if (alpha_size != expected)
    throw std::invalid_argument(std::string(what) + ": multiplier has wrong dimension");
}

// LP: maximize t over (alpha, t) >= 0 with sum(alpha) = 1, alpha_i >= t and
// |(Df^T alpha)_r| <= slack. Column k holds t.
LpResult interior_lp(std::span<const Vector> g, double slack) {
  const std::size_t k = g.size();
  const std::size_t n = g[0].size();
  Vector c(k + 1, 0.0);
  c[k] = 1.0;
  Matrix a_eq(1, k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) a_eq(0, i) = 1.0;
  const Vector b_eq{1.0};
  Matrix a_ineq(2 * n + k, k + 1, 0.0);
  Vector b_ineq(2 * n + k, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      a_ineq(2 * r, i) = g[i][r];
      a_ineq(2 * r + 1, i) = -g[i][r];
    }
    b_ineq[2 * r] = slack;
    b_ineq[2 * r + 1] = slack;
  }
  for (std::size_t i = 0; i < k; ++i) {
    a_ineq(2 * n + i, k) = 1.0;
    a_ineq(2 * n + i, i) = -1.0;
  }
  return lp_solve(c, a_eq, b_eq, a_ineq, b_ineq);
}

Vector normalized_simplex(std::span<const double> v) {
  Vector a(v.begin(), v.end());
  double total = 0.0;
  for (double& w : a) {
    w = std::max(w, 0.0);
    total += w;
  }
  for (double& w : a) w /= total;
  return a;
}

}  // namespace

void Tolerances::validate() const {
  if (!(eps_crit > 0.0) || !(rank_rtol > 0.0))
    throw std::invalid_argument("tolerances: eps and rank rtol must be positive");
  if (!(tau_zero > 0.0) || !(tau_zero < tau_int))
    throw std::invalid_argument("tolerances: need 0 < tau_zero < tau_int");
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::NotCritical: return "NotCritical";
    case Classification::Interior: return "Interior";
    case Classification::ZeroEdge: return "ZeroEdge";
    case Classification::BoundaryAmbiguous: return "Boundary-Ambiguous";
  }
  return "NotCritical";
}

std::optional<Classification> parse_classification(std::string_view s) {
  for (auto c : {Classification::NotCritical, Classification::Interior, Classification::ZeroEdge,
                 Classification::BoundaryAmbiguous})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

Multiplier::Multiplier(Vector alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw std::invalid_argument("multiplier: empty");
  double total = 0.0;
  for (double& a : alpha_) {
    if (!(a >= -1e-12)) throw std::invalid_argument("multiplier: negative component");
    a = std::max(a, 0.0);
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("multiplier: sum is not 1");
}

Multiplier Multiplier::from_reduced(std::span<const double> reduced) {
  Vector a(reduced.begin(), reduced.end());
  a.push_back(1.0 - std::accumulate(reduced.begin(), reduced.end(), 0.0));
  return Multiplier(std::move(a));
}

double Multiplier::min_component() const {
  return *std::min_element(alpha_.begin(), alpha_.end());
}

Vector residual_F(const Problem& p, std::span<const double> x, std::span<const double> alpha) {
  check_sizes(p, x, alpha.size(), p.num_objectives(), "residual_F");
  const std::size_t n = p.dim();
  Vector out(n + 1, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const Vector g = p.gradient(i, x);
    for (std::size_t r = 0; r < n; ++r) out[r] += alpha[i] * g[r];
    total += alpha[i];
  }
  out[n] = total - 1.0;
  return out;
}

Vector residual_Ftilde(const Problem& p, std::span<const double> x,
                       std::span<const double> alpha_reduced) {
  const std::size_t k = p.num_objectives();
  check_sizes(p, x, alpha_reduced.size(), k - 1, "residual_Ftilde");
  const std::size_t n = p.dim();
  const Vector gk = p.gradient(k - 1, x);
  Vector out = gk;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const Vector g = p.gradient(i, x);
    for (std::size_t r = 0; r < n; ++r) out[r] += alpha_reduced[i] * (g[r] - gk[r]);
  }
  return out;
}

Matrix d_x_Ftilde(const Problem& p, std::span<const double> x,
                  std::span<const double> alpha_reduced) {
  const std::size_t k = p.num_objectives();
  check_sizes(p, x, alpha_reduced.size(), k - 1, "d_x_Ftilde");
  const std::size_t n = p.dim();
  Matrix out(n, n, 0.0);
  double rest = 1.0;
  auto accumulate_hessian = [&](std::size_t i, double w) {
    if (w == 0.0) return;
    const Matrix h = p.hessian(i, x);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out(r, c) += w * h(r, c);
  };
  for (std::size_t i = 0; i + 1 < k; ++i) {
    accumulate_hessian(i, alpha_reduced[i]);
    rest -= alpha_reduced[i];
  }
  accumulate_hessian(k - 1, rest);
  return out;
}

Matrix d_alpha_Ftilde(const Problem& p, std::span<const double> x) {
  const std::size_t k = p.num_objectives();
  check_sizes(p, x, 0, 0, "d_alpha_Ftilde");
  const std::size_t n = p.dim();
  const std::vector<Vector> g = p.gradients(x);
  Matrix out(n, k - 1, 0.0);
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t r = 0; r < n; ++r) out(r, i) = g[i][r] - g[k - 1][r];
  return out;
}

double criticality_scale(std::span<const Vector> gradients) {
  double s = 1.0;
  for (const Vector& g : gradients) s = std::max(s, norm2(g));
  return s;
}

PointDiagnostics diagnose(const Problem& p, std::span<const double> x, const Tolerances& tol) {
  if (x.size() != p.dim()) throw std::invalid_argument("diagnose: point has wrong dimension");
  const std::size_t k = p.num_objectives();
  const std::size_t n = p.dim();
  const std::vector<Vector> g = p.gradients(x);
  const double scale = criticality_scale(g);
  const MinNormResult mn = min_norm_point(g);

  PointDiagnostics d;
  d.x.assign(x.begin(), x.end());
  d.omega_raw = mn.omega;
  d.omega = mn.omega / scale;

  const Matrix df = Matrix::from_rows(g, n);
  const std::size_t full_rank = rank(df, tol.rank_rtol);
  d.jac_rank = static_cast<int>(full_rank);
  if (d.omega > tol.eps_crit) return d;

  // At a critical point the rows of Df are affinely dependent, so rank <= k-1.
  d.jac_rank = static_cast<int>(std::min(full_rank, k - 1));

  // Stacked system [Df^T; 1^T] with gradients normalized by the scale.
  Matrix b(n + 1, k, 1.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < k; ++i) b(r, i) = g[i][r] / scale;
  d.multiplier_dim = static_cast<int>(k - rank(b, tol.rank_rtol));

  if (k == 1) {
    // The single multiplier alpha_1 = 1; treated as lying on the simplex edge.
    d.classification = Classification::ZeroEdge;
    d.tstar = 0.0;
    d.witness = Multiplier(Vector{1.0});
  } else {
    // Grid nodes are only near-critical; the residual bound admits the
    // min-norm multiplier, so the LP is feasible whenever omega is small.
    const double slack = mn.omega * (1.0 + 1e-6) + 1e-14 * scale;
    const LpResult lp = interior_lp(g, slack);
    Vector alpha;
    if (lp.status == LpStatus::Optimal) {
      alpha = normalized_simplex(std::span<const double>(lp.solution).first(k));
      d.tstar = std::max(lp.objective, 0.0);
    } else {
      alpha = mn.alpha;
      d.tstar = *std::min_element(alpha.begin(), alpha.end());
    }
    if (d.tstar > tol.tau_int) {
      d.classification = Classification::Interior;
    } else if (d.tstar < tol.tau_zero) {
      d.classification = Classification::ZeroEdge;
      // Components below tau_zero are slack artifacts; report them as exact zeros.
      for (double& a : alpha)
        if (a < tol.tau_zero) a = 0.0;
      alpha = normalized_simplex(alpha);
    } else {
      d.classification = Classification::BoundaryAmbiguous;
    }
    d.witness = Multiplier(std::move(alpha));
  }
  d.degenerate = is_degenerate(p, x, d.witness->reduced(), tol.rank_rtol);
  return d;
}

bool is_degenerate(const Problem& p, std::span<const double> x,
                   std::span<const double> alpha_reduced, double rtol) {
  return rank(d_x_Ftilde(p, x, alpha_reduced), rtol) + 1 <= p.dim();
}

std::vector<Vector> tangent_space(const Problem& p, std::span<const double> x,
                                  const Multiplier& alpha, const Tolerances& tol) {
  const std::size_t k = p.num_objectives();
  if (alpha.size() != k) throw std::invalid_argument("tangent_space: multiplier has wrong size");
  const Vector reduced = alpha.reduced();
  const Vector res = residual_Ftilde(p, x, reduced);
  const double scale = criticality_scale(p.gradients(x));
  if (norm2(res) > tol.eps_crit * scale)
    throw std::invalid_argument("tangent_space: point is not a zero of the reduced KKT system");

  const Matrix dx = d_x_Ftilde(p, x, reduced);
  const std::size_t n = p.dim();
  if (rank(dx, tol.rank_rtol) < n)
    throw DegeneratePointError("tangent_space: D_x F~ is singular at this point");
  if (k == 1) return {};

  const Matrix da = d_alpha_Ftilde(p, x);
  Matrix v(n, k - 1, 0.0);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const Vector col = da.column(j);
    const Vector s = solve(dx, col, tol.rank_rtol);
    for (std::size_t r = 0; r < n; ++r) v(r, j) = -s[r];
  }
  return range_basis(v, tol.rank_rtol);
}

SubproblemId decompose_at(const Problem& p, std::span<const double> x, const Tolerances& tol) {
  const PointDiagnostics d = diagnose(p, x, tol);
  if (!d.critical()) throw std::invalid_argument("decompose_at: point is not critical");
  const std::size_t k = p.num_objectives();
  const std::size_t size = static_cast<std::size_t>(d.jac_rank) + 1;

  std::optional<SubproblemId> first_passing;
  for (const SubproblemId& id : subsets_of_size(k, size)) {
    const PointDiagnostics sub = diagnose(p.restrict_to(id.indices()), x, tol);
    if (!sub.critical() || sub.jac_rank != d.jac_rank) continue;
    if (d.classification != Classification::ZeroEdge) return id;
    if (sub.classification == Classification::ZeroEdge) return id;
    if (!first_passing) first_passing = id;
  }
  if (first_passing) return *first_passing;
  throw NoSubsetFoundError("decompose_at: no subset of size " + std::to_string(size) +
                           " reproduces the criticality and rank at this point");
}

}  // namespace pareto

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pareto/linalg.hpp"

namespace pareto {

/// Largest bundle accepted by min_norm_point (the search visits 2^k - 1 supports).
inline constexpr std::size_t kMaxMinNormVectors = 12;

struct MinNormResult {
  double omega = 0.0;                // || sum_i alpha_i g_i ||
  Vector alpha;                      // point of the standard simplex
  std::vector<std::size_t> support;  // indices with alpha_i > 0
};

/// Exact minimum-norm point of conv{g_1..g_k}.
///
/// Every nonempty support S is visited (by size, then lexicographically). For
/// each S the affine minimizer of || sum_{i in S} a_i g_i || with sum a_i = 1 is
/// computed by a minimum-norm least-squares solve; candidates with a negative
/// weight are discarded. Ties go to the earlier support.
MinNormResult min_norm_point(std::span<const Vector> g);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Vector solution;
};

/// Dense two-phase simplex with Bland's rule.
///
///   maximize c^T x  s.t.  A_eq x = b_eq,  A_ineq x <= b_ineq,  x >= 0.
///
/// Either constraint block may have zero rows. Throws std::invalid_argument on
/// dimension mismatch.
LpResult lp_solve(std::span<const double> c, const Matrix& a_eq, std::span<const double> b_eq,
                  const Matrix& a_ineq, std::span<const double> b_ineq);

}  // namespace pareto

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pareto/linalg.hpp"
#include "pareto/problem.hpp"
#include "pareto/subproblem.hpp"

namespace pareto {

/// Thresholds shared by every classification decision.
struct Tolerances {
  double eps_crit = 1e-6;  // scaled criticality measure threshold
  double tau_int = 1e-6;   // t* above this: strictly positive multiplier exists
  double tau_zero = 1e-9;  // t* below this: every multiplier has a zero component
  double rank_rtol = kDefaultRankRtol;

  /// Throws std::invalid_argument unless 0 < tau_zero < tau_int and the rest are positive.
  void validate() const;
};

enum class Classification { NotCritical, Interior, ZeroEdge, BoundaryAmbiguous };

std::string_view to_string(Classification c);
std::optional<Classification> parse_classification(std::string_view s);

/// KKT multiplier: a point of the standard simplex in R^k (full form).
class Multiplier {
 public:
  /// Throws std::invalid_argument unless alpha >= 0 and sum(alpha) = 1 within 1e-9.
  explicit Multiplier(Vector alpha);
  /// Lifts (a_1..a_{k-1}) with a_k = 1 - sum.
  static Multiplier from_reduced(std::span<const double> reduced);

  const Vector& full() const { return alpha_; }
  Vector reduced() const { return {alpha_.begin(), alpha_.end() - 1}; }
  std::size_t size() const { return alpha_.size(); }
  double min_component() const;

 private:
  Vector alpha_;
};

struct PointDiagnostics {
  Vector x;
  double omega = 0.0;      // min-norm of the gradient hull over criticality_scale(x)
  double omega_raw = 0.0;  // unscaled min-norm
  Classification classification = Classification::NotCritical;
  std::optional<Multiplier> witness;
  double tstar = 0.0;      // max over multipliers of the smallest component
  int jac_rank = 0;        // rank of Df(x), capped at k-1 for critical points
  int multiplier_dim = -1; // affine dimension of the multiplier set; -1 if not critical
  bool degenerate = false; // rank(D_x F~(x, witness)) <= n-1

  bool critical() const { return classification != Classification::NotCritical; }
};

/// Raised by tangent_space when D_x F~ is numerically singular.
class DegeneratePointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by decompose_at when no subset passes (tolerance inconsistency).
class NoSubsetFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (sum_i alpha_i grad f_i(x), sum_i alpha_i - 1); alpha in full k form.
Vector residual_F(const Problem& p, std::span<const double> x, std::span<const double> alpha);

/// sum_{i<k} a_i (grad f_i - grad f_k) + grad f_k for reduced a in R^{k-1}.
Vector residual_Ftilde(const Problem& p, std::span<const double> x,
                       std::span<const double> alpha_reduced);

/// sum_{i<k} a_i H_i + (1 - sum a_i) H_k.
Matrix d_x_Ftilde(const Problem& p, std::span<const double> x,
                  std::span<const double> alpha_reduced);

/// n x (k-1); column i is grad f_i - grad f_k. Independent of alpha.
Matrix d_alpha_Ftilde(const Problem& p, std::span<const double> x);

/// max(1, max_i ||g_i||): the normalizer applied to the min-norm value.
double criticality_scale(std::span<const Vector> gradients);

/// Criticality, multiplier classification, Jacobian rank, multiplier-set
/// dimension and degeneracy at x.
PointDiagnostics diagnose(const Problem& p, std::span<const double> x, const Tolerances& tol = {});

/// rank(D_x F~(x, alpha_reduced)) <= n - 1.
bool is_degenerate(const Problem& p, std::span<const double> x,
                   std::span<const double> alpha_reduced, double rtol = kDefaultRankRtol);

/// Orthonormal basis of pr_x(ker DF~(x, alpha)), computed from
/// v_x = -(D_x F~)^{-1} D_alpha F~ v_alpha. Throws DegeneratePointError when
/// D_x F~ is singular and std::invalid_argument when F~(x, alpha) is not
/// within eps_crit of zero.
std::vector<Vector> tangent_space(const Problem& p, std::span<const double> x,
                                  const Multiplier& alpha, const Tolerances& tol = {});

/// Subset I with |I| = jac_rank + 1, x critical for MOP^I and rank(Df^I(x)) =
/// jac_rank. Exhaustive lexicographic search; for ZeroEdge points a subset
/// whose own classification is ZeroEdge is preferred.
SubproblemId decompose_at(const Problem& p, std::span<const double> x, const Tolerances& tol = {});

}  // namespace pareto

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pareto/solvers.hpp"

namespace pareto {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;
constexpr int kMaxIterations = 100000;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), cols_(cols), t_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t j = 0; j <= cols_; ++j) at(row, j) /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  void drop_row(std::size_t row) {
    t_.erase(t_.begin() + static_cast<long>(row * (cols_ + 1)),
             t_.begin() + static_cast<long>((row + 1) * (cols_ + 1)));
    basis_.erase(basis_.begin() + static_cast<long>(row));
    --m_;
  }

  // Maximizes cost^T x over the current basis; columns with allowed[j] false never enter.
  // Returns false if unbounded.
  bool optimize(std::span<const double> cost, const std::vector<bool>& allowed) {
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      // Bland: lowest-index column with positive reduced cost enters.
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allowed[j]) continue;
        double d = cost[j];
        for (std::size_t i = 0; i < m_; ++i) d -= cost[basis_[i]] * at(i, j);
        if (d > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;

      std::size_t leave = m_;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(i) / a;
        if (leave == m_ || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("lp_solve: iteration limit reached");
  }

 private:
  std::size_t m_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult lp_solve(std::span<const double> c, const Matrix& a_eq, std::span<const double> b_eq,
                  const Matrix& a_ineq, std::span<const double> b_ineq) {
  const std::size_t nv = c.size();
  const std::size_t me = a_eq.rows();
  const std::size_t mi = a_ineq.rows();
  if ((me > 0 && a_eq.cols() != nv) || (mi > 0 && a_ineq.cols() != nv) || b_eq.size() != me ||
      b_ineq.size() != mi)
    throw std::invalid_argument("lp_solve: dimension mismatch");

  // Column layout: [x | slacks | artificials].
  std::vector<bool> needs_artificial(me + mi, false);
  std::size_t na = 0;
  for (std::size_t i = 0; i < me; ++i) {
    needs_artificial[i] = true;
    ++na;
  }
  for (std::size_t i = 0; i < mi; ++i)
    if (b_ineq[i] < 0.0) {
      needs_artificial[me + i] = true;
      ++na;
    }
  const std::size_t slack0 = nv;
  const std::size_t art0 = nv + mi;
  const std::size_t ncols = nv + mi + na;
  Tableau tab(me + mi, ncols);

  std::size_t next_art = art0;
  for (std::size_t i = 0; i < me; ++i) {
    const double sign = b_eq[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) tab.at(i, j) = sign * a_eq(i, j);
    tab.rhs(i) = sign * b_eq[i];
    tab.at(i, next_art) = 1.0;
    tab.basis()[i] = next_art++;
  }
  for (std::size_t i = 0; i < mi; ++i) {
    const std::size_t row = me + i;
    const double sign = b_ineq[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) tab.at(row, j) = sign * a_ineq(i, j);
    tab.at(row, slack0 + i) = sign;
    tab.rhs(row) = sign * b_ineq[i];
    if (needs_artificial[row]) {
      tab.at(row, next_art) = 1.0;
      tab.basis()[row] = next_art++;
    } else {
      tab.basis()[row] = slack0 + i;
    }
  }

  double bscale = 1.0;
  for (double v : b_eq) bscale = std::max(bscale, std::abs(v));
  for (double v : b_ineq) bscale = std::max(bscale, std::abs(v));

  LpResult result;
  if (na > 0) {
    std::vector<double> phase1(ncols, 0.0);
    for (std::size_t j = art0; j < ncols; ++j) phase1[j] = -1.0;
    std::vector<bool> all(ncols, true);
    tab.optimize(phase1, all);
    double infeas = 0.0;
    for (std::size_t i = 0; i < tab.rows(); ++i)
      if (tab.basis()[i] >= art0) infeas += tab.rhs(i);
    if (infeas > kFeasTol * bscale) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < art0) {
        ++i;
        continue;
      }
      std::size_t col = art0;
      for (std::size_t j = 0; j < art0; ++j)
        if (std::abs(tab.at(i, j)) > 1e-9) {
          col = j;
          break;
        }
      if (col == art0) {
        tab.drop_row(i);
      } else {
        tab.pivot(i, col);
        ++i;
      }
    }
  }

  std::vector<double> cost(ncols, 0.0);
  std::copy(c.begin(), c.end(), cost.begin());
  std::vector<bool> allowed(ncols, true);
  for (std::size_t j = art0; j < ncols; ++j) allowed[j] = false;
  if (!tab.optimize(cost, allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.solution.assign(nv, 0.0);
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] < nv) result.solution[tab.basis()[i]] = std::max(tab.rhs(i), 0.0);
  result.objective = dot(c, result.solution);
  return result;
}

}  // namespace pareto

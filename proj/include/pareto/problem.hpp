#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pareto/expr.hpp"
#include "pareto/linalg.hpp"

namespace pareto {

/// Problem-file syntax or semantic error, with 1-based line/column.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Unconstrained multiobjective problem: k smooth objectives over R^n.
/// Objective indices are zero-based throughout the library.
class Problem {
 public:
  Problem(std::size_t n, std::vector<Expr> objectives, std::string name = {});

  std::size_t dim() const { return n_; }
  std::size_t num_objectives() const { return objectives_.size(); }
  const std::string& name() const { return name_; }
  const Expr& objective(std::size_t i) const { return objectives_.at(i); }

  double value(std::size_t i, std::span<const double> x) const;
  Vector gradient(std::size_t i, std::span<const double> x) const;
  /// Exact Hessian; mirrored entries are bitwise equal.
  Matrix hessian(std::size_t i, std::span<const double> x) const;

  /// All gradients at x, one per objective.
  std::vector<Vector> gradients(std::span<const double> x) const;
  /// Df(x): k x n, row i is the gradient of objective i.
  Matrix jacobian(std::span<const double> x) const;

  /// Problem restricted to the given objective indices (order preserved).
  Problem restrict_to(std::span<const std::size_t> indices) const;

  /// Problem-file text that parses back to a structurally equal problem.
  std::string render() const;

 private:
  void check_point(std::span<const double> x) const;

  std::size_t n_;
  std::vector<Expr> objectives_;
  std::string name_;
};

/// Parses problem-file text. See README for the grammar.
Problem parse_problem(std::string_view text, std::string name = {});

/// Parses a single expression (no statements); variables may be x1..xn.
Expr parse_expression(std::string_view text, std::size_t n);

/// Reads and parses a problem file; the file stem becomes the problem name.
Problem load_problem(const std::string& path);

bool structurally_equal(const Problem& a, const Problem& b);

}  // namespace pareto

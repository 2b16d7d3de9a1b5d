#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pareto {

/// Raised when an expression hits a singularity (division by zero, zero to a
/// negative power) or produces a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Second-order forward-mode number: value, two first-order parts and the
/// mixed second-order part. Seeding e1 = e_i, e2 = e_j yields df/dx_i in
/// `d1` and d2f/dx_i dx_j in `d12`.
struct HyperDual {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d12 = 0.0;

  constexpr HyperDual() = default;
  constexpr explicit HyperDual(double value) : v(value) {}
  constexpr HyperDual(double value, double e1, double e2, double e12)
      : v(value), d1(e1), d2(e2), d12(e12) {}
};

constexpr HyperDual operator+(const HyperDual& a, const HyperDual& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d12 + b.d12};
}
constexpr HyperDual operator-(const HyperDual& a, const HyperDual& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d12 - b.d12};
}
constexpr HyperDual operator-(const HyperDual& a) { return {-a.v, -a.d1, -a.d2, -a.d12}; }
constexpr HyperDual operator*(const HyperDual& a, const HyperDual& b) {
  return {a.v * b.v, a.v * b.d1 + a.d1 * b.v, a.v * b.d2 + a.d2 * b.v,
          a.v * b.d12 + a.d1 * b.d2 + a.d2 * b.d1 + a.d12 * b.v};
}

/// Applies a scalar function given its value and first two derivatives at a.v.
constexpr HyperDual chain(const HyperDual& a, double f, double df, double ddf) {
  return {f, df * a.d1, df * a.d2, df * a.d12 + ddf * a.d1 * a.d2};
}

inline HyperDual reciprocal(const HyperDual& a) {
  const double inv = 1.0 / a.v;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}
inline HyperDual sin(const HyperDual& a) {
  const double s = std::sin(a.v);
  return chain(a, s, std::cos(a.v), -s);
}
inline HyperDual cos(const HyperDual& a) {
  const double c = std::cos(a.v);
  return chain(a, c, -std::sin(a.v), -c);
}
inline HyperDual exp(const HyperDual& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}

inline double real_part(double a) { return a; }
inline double real_part(const HyperDual& a) { return a.v; }
inline double reciprocal(double a) { return 1.0 / a; }

enum class Op { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };

/// One node of a flattened expression tree. Children always precede their
/// parent, so a single forward sweep evaluates the tree.
struct Node {
  Op op = Op::Constant;
  int lhs = -1;
  int rhs = -1;
  double constant = 0.0;  // Op::Constant
  int variable = 0;       // Op::Variable, zero-based
  int exponent = 0;       // Op::Pow

  friend bool operator==(const Node&, const Node&) = default;
};

/// Immutable expression over variables x1..xn, stored in post-order.
class Expr {
 public:
  Expr() = default;

  static Expr constant(double c);
  static Expr variable(int index);  // zero-based
  static Expr unary(Op op, const Expr& operand);
  static Expr binary(Op op, const Expr& lhs, const Expr& rhs);
  static Expr power(const Expr& base, int exponent);

  bool empty() const { return nodes_.empty(); }
  std::span<const Node> nodes() const { return nodes_; }
  int root() const { return static_cast<int>(nodes_.size()) - 1; }

  /// Largest zero-based variable index referenced, or -1 for constants.
  int max_variable() const;

  template <typename T>
  T evaluate(std::span<const T> x) const;

  /// Structural equality of the trees, independent of node layout.
  friend bool structurally_equal(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}
  int append(const Expr& other);

  std::vector<Node> nodes_;
};

/// Renders an expression back to problem-file syntax (fully parenthesized).
std::string render(const Expr& e);

namespace detail {

template <typename T>
T integer_power(T base, int exponent) {
  if (exponent == 0) return T(1.0);
  if (exponent < 0) {
    if (real_part(base) == 0.0) throw EvaluationError("zero raised to a negative power");
    return reciprocal(integer_power(base, -exponent));
  }
  T result(1.0);
  bool first = true;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1u;
    if (e != 0) base = base * base;
  }
  return result;
}

}  // namespace detail

template <typename T>
T Expr::evaluate(std::span<const T> x) const {
  if (nodes_.empty()) throw std::logic_error("evaluate: empty expression");
  std::vector<T> vals(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Constant: vals[i] = T(n.constant); break;
      case Op::Variable:
        if (static_cast<std::size_t>(n.variable) >= x.size())
          throw std::out_of_range("evaluate: variable index out of range");
        vals[i] = x[static_cast<std::size_t>(n.variable)];
        break;
      case Op::Add: vals[i] = vals[n.lhs] + vals[n.rhs]; break;
      case Op::Sub: vals[i] = vals[n.lhs] - vals[n.rhs]; break;
      case Op::Mul: vals[i] = vals[n.lhs] * vals[n.rhs]; break;
      case Op::Div:
        if (real_part(vals[n.rhs]) == 0.0) throw EvaluationError("division by zero");
        vals[i] = vals[n.lhs] * reciprocal(vals[n.rhs]);
        break;
      case Op::Neg: vals[i] = -vals[n.lhs]; break;
      case Op::Pow: vals[i] = detail::integer_power(vals[n.lhs], n.exponent); break;
      case Op::Sin: { using std::sin; vals[i] = sin(vals[n.lhs]); break; }
      case Op::Cos: { using std::cos; vals[i] = cos(vals[n.lhs]); break; }
      case Op::Exp: { using std::exp; vals[i] = exp(vals[n.lhs]); break; }
    }
  }
  T out = vals.back();
  if (!std::isfinite(real_part(out))) throw EvaluationError("non-finite value");
  return out;
}

}  // namespace pareto

#include "pareto/expr.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

namespace pareto {

Expr Expr::constant(double c) {
  Node n;
  n.op = Op::Constant;
  n.constant = c;
  return Expr({n});
}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("variable index must be nonnegative");
  Node n;
  n.op = Op::Variable;
  n.variable = index;
  return Expr({n});
}

int Expr::append(const Expr& other) {
  const int offset = static_cast<int>(nodes_.size());
  for (Node n : other.nodes_) {
    if (n.lhs >= 0) n.lhs += offset;
    if (n.rhs >= 0) n.rhs += offset;
    nodes_.push_back(n);
  }
  return static_cast<int>(nodes_.size()) - 1;
}

Expr Expr::unary(Op op, const Expr& operand) {
  if (op != Op::Neg && op != Op::Sin && op != Op::Cos && op != Op::Exp)
    throw std::invalid_argument("unary: not a unary operator");
  Expr e;
  Node n;
  n.op = op;
  n.lhs = e.append(operand);
  e.nodes_.push_back(n);
  return e;
}

Expr Expr::binary(Op op, const Expr& lhs, const Expr& rhs) {
  if (op != Op::Add && op != Op::Sub && op != Op::Mul && op != Op::Div)
    throw std::invalid_argument("binary: not a binary operator");
  Expr e;
  Node n;
  n.op = op;
  n.lhs = e.append(lhs);
  n.rhs = e.append(rhs);
  e.nodes_.push_back(n);
  return e;
}

Expr Expr::power(const Expr& base, int exponent) {
  Expr e;
  Node n;
  n.op = Op::Pow;
  n.exponent = exponent;
  n.lhs = e.append(base);
  e.nodes_.push_back(n);
  return e;
}

int Expr::max_variable() const {
  int m = -1;
  for (const Node& n : nodes_)
    if (n.op == Op::Variable) m = std::max(m, n.variable);
  return m;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  std::function<bool(int, int)> same = [&](int i, int j) {
    const Node& x = a.nodes_[static_cast<std::size_t>(i)];
    const Node& y = b.nodes_[static_cast<std::size_t>(j)];
    if (x.op != y.op) return false;
    switch (x.op) {
      case Op::Constant: return x.constant == y.constant;
      case Op::Variable: return x.variable == y.variable;
      case Op::Pow: return x.exponent == y.exponent && same(x.lhs, y.lhs);
      case Op::Neg:
      case Op::Sin:
      case Op::Cos:
      case Op::Exp: return same(x.lhs, y.lhs);
      default: return same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
    }
  };
  return same(a.root(), b.root());
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void render_node(std::span<const Node> nodes, int i, std::string& out) {
  const Node& n = nodes[static_cast<std::size_t>(i)];
  auto bin = [&](const char* sym) {
    out += '(';
    render_node(nodes, n.lhs, out);
    out += sym;
    render_node(nodes, n.rhs, out);
    out += ')';
  };
  auto fn = [&](const char* name) {
    out += name;
    out += '(';
    render_node(nodes, n.lhs, out);
    out += ')';
  };
  switch (n.op) {
    case Op::Constant:
      if (n.constant < 0.0 || std::signbit(n.constant)) {
        out += "(-" + format_number(-n.constant) + ")";
      } else {
        out += format_number(n.constant);
      }
      break;
    case Op::Variable: out += "x" + std::to_string(n.variable + 1); break;
    case Op::Add: bin(" + "); break;
    case Op::Sub: bin(" - "); break;
    case Op::Mul: bin(" * "); break;
    case Op::Div: bin(" / "); break;
    case Op::Neg:
      out += "-(";
      render_node(nodes, n.lhs, out);
      out += ')';
      break;
    case Op::Pow:
      out += '(';
      render_node(nodes, n.lhs, out);
      out += ")^" + std::to_string(n.exponent);
      break;
    case Op::Sin: fn("sin"); break;
    case Op::Cos: fn("cos"); break;
    case Op::Exp: fn("exp"); break;
  }
}

}  // namespace

std::string render(const Expr& e) {
  if (e.empty()) return {};
  std::string out;
  render_node(e.nodes(), e.root(), out);
  return out;
}

}  // namespace pareto

#include "pareto/problem.hpp"

namespace pareto {

Problem::Problem(std::size_t n, std::vector<Expr> objectives, std::string name)
    : n_(n), objectives_(std::move(objectives)), name_(std::move(name)) {
  if (n_ == 0) throw std::invalid_argument("Problem: need at least one variable");
  if (objectives_.empty()) throw std::invalid_argument("Problem: need at least one objective");
  for (const Expr& e : objectives_) {
    if (e.empty()) throw std::invalid_argument("Problem: empty objective");
    if (e.max_variable() >= static_cast<int>(n_))
      throw std::invalid_argument("Problem: objective references a variable beyond x" +
                                  std::to_string(n_));
  }
}

void Problem::check_point(std::span<const double> x) const {
  if (x.size() != n_)
    throw std::invalid_argument("point has " + std::to_string(x.size()) +
                                " coordinates, problem has n = " + std::to_string(n_));
}

double Problem::value(std::size_t i, std::span<const double> x) const {
  check_point(x);
  return objectives_.at(i).evaluate<double>(x);
}

Vector Problem::gradient(std::size_t i, std::span<const double> x) const {
  check_point(x);
  const Expr& f = objectives_.at(i);
  std::vector<HyperDual> xs(n_);
  for (std::size_t d = 0; d < n_; ++d) xs[d] = HyperDual(x[d]);
  Vector g(n_);
  for (std::size_t d = 0; d < n_; ++d) {
    xs[d].d1 = 1.0;
    g[d] = f.evaluate<HyperDual>(xs).d1;
    xs[d].d1 = 0.0;
  }
  return g;
}

Matrix Problem::hessian(std::size_t i, std::span<const double> x) const {
  check_point(x);
  const Expr& f = objectives_.at(i);
  std::vector<HyperDual> xs(n_);
  for (std::size_t d = 0; d < n_; ++d) xs[d] = HyperDual(x[d]);
  Matrix h(n_, n_);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a; b < n_; ++b) {
      xs[a].d1 = 1.0;
      xs[b].d2 = 1.0;
      const double v = f.evaluate<HyperDual>(xs).d12;
      xs[a].d1 = 0.0;
      xs[b].d2 = 0.0;
      h(a, b) = v;
      h(b, a) = v;
    }
  }
  return h;
}

std::vector<Vector> Problem::gradients(std::span<const double> x) const {
  std::vector<Vector> out;
  out.reserve(objectives_.size());
  for (std::size_t i = 0; i < objectives_.size(); ++i) out.push_back(gradient(i, x));
  return out;
}

Matrix Problem::jacobian(std::span<const double> x) const {
  const auto g = gradients(x);
  return Matrix::from_rows(g, n_);
}

Problem Problem::restrict_to(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw std::invalid_argument("restrict_to: empty index set");
  std::vector<Expr> objs;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= objectives_.size())
      throw std::invalid_argument("restrict_to: objective index out of range");
    if (k > 0 && indices[k] <= indices[k - 1])
      throw std::invalid_argument("restrict_to: indices must be strictly increasing");
    objs.push_back(objectives_[indices[k]]);
  }
  return Problem(n_, std::move(objs), name_);
}

std::string Problem::render() const {
  std::string out = "vars:";
  for (std::size_t d = 0; d < n_; ++d) out += " x" + std::to_string(d + 1);
  out += '\n';
  for (const Expr& e : objectives_) out += "objective: " + pareto::render(e) + '\n';
  return out;
}

bool structurally_equal(const Problem& a, const Problem& b) {
  if (a.dim() != b.dim() || a.num_objectives() != b.num_objectives()) return false;
  for (std::size_t i = 0; i < a.num_objectives(); ++i)
    if (!structurally_equal(a.objective(i), b.objective(i))) return false;
  return true;
}

}  // namespace pareto

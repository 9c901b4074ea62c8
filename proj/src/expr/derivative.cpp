#include <unordered_map>
#include <vector>

#include "curvcheck/expr.hpp"

namespace curvcheck {

namespace {

using namespace symbolic;

class Differentiator {
 public:
  explicit Differentiator(std::string_view symbol) : symbol_(symbol) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr d = std::visit([&](const auto& n) { return rule(e, n); },
                        static_cast<const Node::variant&>(e.node()));
    memo_.emplace(e.id(), d);
    return d;
  }

 private:
  Expr rule(const Expr&, const Constant&) { return Expr(0.0); }

  Expr rule(const Expr&, const Symbol& s) { return Expr(s.name == symbol_ ? 1.0 : 0.0); }

  Expr rule(const Expr&, const Negate& n) { return -(*this)(n.child); }

  Expr rule(const Expr&, const Binary& n) {
    const Expr& a = n.lhs;
    const Expr& b = n.rhs;
    switch (n.op) {
      case BinaryOp::add:
        return (*this)(a) + (*this)(b);
      case BinaryOp::subtract:
        return (*this)(a) - (*this)(b);
      case BinaryOp::multiply:
        return (*this)(a) * b + a * (*this)(b);
      case BinaryOp::divide: {
        const Expr da = (*this)(a);
        const Expr db = (*this)(b);
        if (db.is_constant(0.0)) return da / b;
        return (da * b - a * db) / pow(b, Expr(2.0));
      }
      case BinaryOp::power:
        return power_rule(a, b);
    }
    return Expr(0.0);
  }

  Expr power_rule(const Expr& base, const Expr& exponent) {
    if (free_symbols(exponent).empty()) {
      const Expr k = simplify(exponent);
      return k * pow(base, k - Expr(1.0)) * (*this)(base);
    }
    // Variable exponent: a^b = exp(b ln a). The rewritten tree is kept alive
    // because memo_ is keyed by node address.
    const Expr rewritten = exp(exponent * ln(base));
    keep_alive_.push_back(rewritten);
    return (*this)(rewritten);
  }

  Expr rule(const Expr& e, const Call& n) {
    const Expr& x = n.arg;
    const Expr dx = (*this)(x);
    if (dx.is_constant(0.0)) return Expr(0.0);
    switch (n.function) {
      case Function::sin:
        return cos(x) * dx;
      case Function::cos:
        return -(sin(x) * dx);
      case Function::tan:
        return dx / pow(cos(x), Expr(2.0));
      case Function::exp:
        return e * dx;
      case Function::ln:
        return dx / x;
      case Function::sqrt:
        return dx / (Expr(2.0) * e);
      case Function::abs:
        // sign(x) = x/|x|; undefined (division by zero) at x = 0.
        return (x / e) * dx;
    }
    return Expr(0.0);
  }

  std::string_view symbol_;
  std::unordered_map<const void*, Expr> memo_;
  std::vector<Expr> keep_alive_;
};

}  // namespace

Expr diff(const Expr& e, std::string_view symbol) { return Differentiator(symbol)(e); }

Expr diff(const Expr& e, std::string_view symbol, int order) {
  Expr out = e;
  for (int i = 0; i < order; ++i) out = diff(out, symbol);
  return out;
}

}  // namespace curvcheck

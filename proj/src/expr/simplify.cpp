#include <unordered_map>

#include "curvcheck/expr.hpp"
#include "expr/kernels.hpp"

namespace curvcheck {

namespace {

template <typename F>
std::optional<double> try_fold(F&& f) {
  try {
    return f();
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

}  // namespace

namespace symbolic {

Expr operator-(const Expr& a) {
  if (auto c = a.constant_value()) return Expr(-*c);
  if (const auto* n = a.as<Negate>()) return n->child;
  return Expr::negate(a);
}

Expr operator+(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) {
    if (auto v = try_fold([&] { return detail::apply_binary(BinaryOp::add, *ca, *cb); }))
      return Expr(*v);
  }
  if (ca && *ca == 0.0) return b;
  if (cb && *cb == 0.0) return a;
  if (const auto* nb = b.as<Negate>()) return Expr::binary(BinaryOp::subtract, a, nb->child);
  return Expr::binary(BinaryOp::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) {
    if (auto v = try_fold([&] { return detail::apply_binary(BinaryOp::subtract, *ca, *cb); }))
      return Expr(*v);
  }
  if (cb && *cb == 0.0) return a;
  if (ca && *ca == 0.0) return -b;
  if (const auto* nb = b.as<Negate>()) return Expr::binary(BinaryOp::add, a, nb->child);
  return Expr::binary(BinaryOp::subtract, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) {
    if (auto v = try_fold([&] { return detail::apply_binary(BinaryOp::multiply, *ca, *cb); }))
      return Expr(*v);
  }
  if ((ca && *ca == 0.0) || (cb && *cb == 0.0)) return Expr(0.0);
  if (ca && *ca == 1.0) return b;
  if (cb && *cb == 1.0) return a;
  if (ca && *ca == -1.0) return -b;
  if (cb && *cb == -1.0) return -a;
  if (cb && !ca) return b * a;  // constants to the left
  if (ca) {
    if (const auto* nb = b.as<Binary>(); nb != nullptr && nb->op == BinaryOp::multiply) {
      if (auto inner = nb->lhs.constant_value()) return Expr(*ca * *inner) * nb->rhs;
    }
    if (const auto* nb = b.as<Negate>()) return Expr(-*ca) * nb->child;
  }
  if (const auto* na = a.as<Negate>()) return -(na->child * b);
  if (const auto* nb = b.as<Negate>()) return -(a * nb->child);
  return Expr::binary(BinaryOp::multiply, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) {
    if (auto v = try_fold([&] { return detail::apply_binary(BinaryOp::divide, *ca, *cb); }))
      return Expr(*v);
    return Expr::binary(BinaryOp::divide, a, b);
  }
  if (ca && *ca == 0.0) return Expr(0.0);
  if (cb && *cb == 1.0) return a;
  if (cb && *cb == -1.0) return -a;
  if (const auto* na = a.as<Negate>()) return -(na->child / b);
  return Expr::binary(BinaryOp::divide, a, b);
}

Expr pow(const Expr& base, const Expr& exponent) {
  const auto cb = base.constant_value();
  const auto ce = exponent.constant_value();
  if (cb && ce) {
    if (auto v = try_fold([&] { return detail::apply_binary(BinaryOp::power, *cb, *ce); }))
      return Expr(*v);
  }
  if (ce && *ce == 1.0) return base;
  if (ce && *ce == 0.0) return Expr(1.0);
  if (cb && *cb == 1.0) return Expr(1.0);
  return Expr::binary(BinaryOp::power, base, exponent);
}

Expr apply(Function f, const Expr& arg) {
  if (auto c = arg.constant_value()) {
    if (auto v = try_fold([&] { return detail::apply_function(f, *c); })) return Expr(*v);
  }
  return Expr::call(f, arg);
}

Expr sin(const Expr& x) { return apply(Function::sin, x); }
Expr cos(const Expr& x) { return apply(Function::cos, x); }
Expr tan(const Expr& x) { return apply(Function::tan, x); }
Expr exp(const Expr& x) { return apply(Function::exp, x); }
Expr ln(const Expr& x) { return apply(Function::ln, x); }
Expr sqrt(const Expr& x) { return apply(Function::sqrt, x); }
Expr abs(const Expr& x) { return apply(Function::abs, x); }

}  // namespace symbolic

Expr simplify(const Expr& e) {
  using namespace symbolic;
  std::unordered_map<const void*, Expr> memo;
  std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    Expr result = std::visit(
        [&](const auto& n) -> Expr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Negate>) {
            return -go(n.child);
          } else if constexpr (std::is_same_v<T, Binary>) {
            Expr l = go(n.lhs);
            Expr r = go(n.rhs);
            switch (n.op) {
              case BinaryOp::add: return l + r;
              case BinaryOp::subtract: return l - r;
              case BinaryOp::multiply: return l * r;
              case BinaryOp::divide: return l / r;
              case BinaryOp::power: return pow(l, r);
            }
            return x;
          } else if constexpr (std::is_same_v<T, Call>) {
            return apply(n.function, go(n.arg));
          } else {
            return x;
          }
        },
        static_cast<const Node::variant&>(x.node()));
    memo.emplace(x.id(), result);
    return result;
  };
  return go(e);
}

}  // namespace curvcheck

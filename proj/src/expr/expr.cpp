#include <array>
#include <charconv>
#include <unordered_map>

#include "curvcheck/expr.hpp"
#include "expr/kernels.hpp"

namespace curvcheck {

namespace {

constexpr std::array<std::pair<Function, std::string_view>, 7> kFunctionNames{{
    {Function::sin, "sin"},
    {Function::cos, "cos"},
    {Function::tan, "tan"},
    {Function::exp, "exp"},
    {Function::ln, "ln"},
    {Function::sqrt, "sqrt"},
    {Function::abs, "abs"},
}};

const Node::variant& base(const Node& n) { return n; }

}  // namespace

std::string_view name_of(Function f) {
  for (const auto& [fn, name] : kFunctionNames)
    if (fn == f) return name;
  return "?";
}

std::optional<Function> function_from_name(std::string_view name) {
  for (const auto& [fn, n] : kFunctionNames)
    if (n == name) return fn;
  return std::nullopt;
}

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double value) : node_(std::make_shared<const Node>(Constant{value})) {}

Expr Expr::symbol(std::string name) {
  return Expr(std::make_shared<const Node>(Symbol{std::move(name)}));
}

Expr Expr::negate(Expr child) {
  return Expr(std::make_shared<const Node>(Negate{std::move(child)}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(Binary{op, std::move(lhs), std::move(rhs)}));
}

Expr Expr::call(Function f, Expr arg) {
  return Expr(std::make_shared<const Node>(Call{f, std::move(arg)}));
}

std::optional<double> Expr::constant_value() const {
  if (const auto* c = as<Constant>()) return c->value;
  return std::nullopt;
}

bool Expr::is_constant(double value) const {
  const auto* c = as<Constant>();
  return c != nullptr && c->value == value;
}

ParseError::ParseError(Kind kind, std::size_t position, const std::string& message)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      kind_(kind),
      position_(position) {}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  if (const auto* b = e.as<Binary>()) {
    switch (b->op) {
      case BinaryOp::add:
      case BinaryOp::subtract:
        return 1;
      case BinaryOp::multiply:
      case BinaryOp::divide:
        return 2;
      case BinaryOp::power:
        return 4;
    }
  }
  if (e.as<Negate>() != nullptr) return 3;
  if (const auto* c = e.as<Constant>(); c != nullptr && std::signbit(c->value)) return 3;
  return 5;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), std::abs(v));
  std::string s(buf.data(), res.ptr);
  return std::signbit(v) ? "-" + s : s;
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          out += format_number(n.value);
        } else if constexpr (std::is_same_v<T, Symbol>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += '-';
          print_wrapped(n.child, precedence(n.child) <= 3, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int p = precedence(e);
          if (n.op == BinaryOp::power) {
            print_wrapped(n.lhs, precedence(n.lhs) <= 4, out);
            out += '^';
            print_wrapped(n.rhs, precedence(n.rhs) <= 4, out);
            return;
          }
          print_wrapped(n.lhs, precedence(n.lhs) < p, out);
          switch (n.op) {
            case BinaryOp::add: out += " + "; break;
            case BinaryOp::subtract: out += " - "; break;
            case BinaryOp::multiply: out += '*'; break;
            case BinaryOp::divide: out += '/'; break;
            case BinaryOp::power: break;
          }
          // Left-associative parse: an equal-precedence right operand needs parens.
          print_wrapped(n.rhs, precedence(n.rhs) <= p, out);
        } else {
          out += name_of(n.function);
          out += '(';
          print(n.arg, out);
          out += ')';
        }
      },
      base(e.node()));
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural queries

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out,
                     std::unordered_map<const void*, bool>& seen) {
  if (!seen.emplace(e.id(), true).second) return;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Symbol>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Negate>) {
          collect_symbols(n.child, out, seen);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_symbols(n.lhs, out, seen);
          collect_symbols(n.rhs, out, seen);
        } else if constexpr (std::is_same_v<T, Call>) {
          collect_symbols(n.arg, out, seen);
        }
      },
      base(e.node()));
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  std::unordered_map<const void*, bool> seen;
  collect_symbols(e, out, seen);
  return out;
}

bool depends_on(const Expr& e, std::string_view symbol) {
  return free_symbols(e).contains(std::string(symbol));
}

std::size_t node_count(const Expr& e) {
  std::unordered_map<const void*, bool> seen;
  std::function<void(const Expr&)> go = [&](const Expr& x) {
    if (!seen.emplace(x.id(), true).second) return;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Negate>) {
            go(n.child);
          } else if constexpr (std::is_same_v<T, Binary>) {
            go(n.lhs);
            go(n.rhs);
          } else if constexpr (std::is_same_v<T, Call>) {
            go(n.arg);
          }
        },
        base(x.node()));
  };
  go(e);
  return seen.size();
}

Expr substitute(const Expr& e, std::string_view symbol, const Expr& replacement) {
  std::unordered_map<const void*, Expr> memo;
  std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    Expr result = std::visit(
        [&](const auto& n) -> Expr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Symbol>) {
            return n.name == symbol ? replacement : x;
          } else if constexpr (std::is_same_v<T, Negate>) {
            return Expr::negate(go(n.child));
          } else if constexpr (std::is_same_v<T, Binary>) {
            return Expr::binary(n.op, go(n.lhs), go(n.rhs));
          } else if constexpr (std::is_same_v<T, Call>) {
            return Expr::call(n.function, go(n.arg));
          } else {
            return x;
          }
        },
        base(x.node()));
    memo.emplace(x.id(), result);
    return result;
  };
  return go(e);
}

// ---------------------------------------------------------------------------
// Tree evaluation

template <typename Scalar>
Scalar evaluate(const Expr& e, const std::map<std::string, Scalar, std::less<>>& bindings) {
  return std::visit(
      [&](const auto& n) -> Scalar {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return Scalar(n.value);
        } else if constexpr (std::is_same_v<T, Symbol>) {
          auto it = bindings.find(n.name);
          if (it == bindings.end())
            throw EvalError(EvalError::Kind::unbound_symbol, "unbound symbol '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return detail::apply_negate(evaluate(n.child, bindings));
        } else if constexpr (std::is_same_v<T, Binary>) {
          return detail::apply_binary(n.op, evaluate(n.lhs, bindings), evaluate(n.rhs, bindings));
        } else {
          return detail::apply_function(n.function, evaluate(n.arg, bindings));
        }
      },
      base(e.node()));
}

template double evaluate(const Expr&, const std::map<std::string, double, std::less<>>&);
template long double evaluate(const Expr&, const std::map<std::string, long double, std::less<>>&);

}  // namespace curvcheck

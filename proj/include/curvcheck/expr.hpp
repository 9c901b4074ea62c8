#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace curvcheck {

enum class BinaryOp { add, subtract, multiply, divide, power };
enum class Function { sin, cos, tan, exp, ln, sqrt, abs };

std::string_view name_of(Function f);
std::optional<Function> function_from_name(std::string_view name);

struct Node;

/// Immutable expression tree over named symbols. Copies share structure.
class Expr {
 public:
  Expr();
  Expr(double value);  // NOLINT: constants convert implicitly

  static Expr symbol(std::string name);

  // Raw constructors: build exactly the requested node, no folding.
  static Expr negate(Expr child);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Function f, Expr arg);

  const Node& node() const { return *node_; }
  const void* id() const { return node_.get(); }

  template <typename T>
  const T* as() const;

  std::optional<double> constant_value() const;
  bool is_constant(double value) const;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Constant {
  double value;
};
struct Symbol {
  std::string name;
};
struct Negate {
  Expr child;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct Call {
  Function function;
  Expr arg;
};

struct Node : std::variant<Constant, Symbol, Negate, Binary, Call> {
  using variant::variant;
};

template <typename T>
const T* Expr::as() const {
  return std::get_if<T>(static_cast<const Node::variant*>(node_.get()));
}

using Bindings = std::map<std::string, double, std::less<>>;

class ParseError : public std::runtime_error {
 public:
  enum class Kind { lex, syntax, arity };
  ParseError(Kind kind, std::size_t position, const std::string& message);
  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

class EvalError : public std::runtime_error {
 public:
  enum class Kind { unbound_symbol, domain };
  EvalError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Parses the infix grammar: + - * / ^ (right associative), unary minus
/// binding looser than ^, calls to sin cos tan exp ln sqrt abs.
Expr parse(std::string_view text);

/// Prints in a form that parse() reads back to an equivalent tree.
std::string to_string(const Expr& e);

Expr diff(const Expr& e, std::string_view symbol);
Expr diff(const Expr& e, std::string_view symbol, int order);

/// Constant folding and identity elimination. x^0 -> 1 and 0/x -> 0 assume
/// x != 0.
Expr simplify(const Expr& e);

Expr substitute(const Expr& e, std::string_view symbol, const Expr& replacement);

std::set<std::string> free_symbols(const Expr& e);
bool depends_on(const Expr& e, std::string_view symbol);
/// Number of distinct nodes (shared subtrees counted once).
std::size_t node_count(const Expr& e);

template <typename Scalar>
Scalar evaluate(const Expr& e, const std::map<std::string, Scalar, std::less<>>& bindings);

extern template double evaluate(const Expr&, const std::map<std::string, double, std::less<>>&);
extern template long double evaluate(const Expr&,
                                     const std::map<std::string, long double, std::less<>>&);

// Folding builders. Apply the local rules of simplify() at construction.
namespace symbolic {
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr apply(Function f, const Expr& arg);
Expr sin(const Expr& x);
Expr cos(const Expr& x);
Expr tan(const Expr& x);
Expr exp(const Expr& x);
Expr ln(const Expr& x);
Expr sqrt(const Expr& x);
Expr abs(const Expr& x);
inline Expr sym(std::string name) { return Expr::symbol(std::move(name)); }
}  // namespace symbolic

/// Straight-line evaluation of many expressions sharing subtrees. Structurally
/// identical subexpressions are computed once.
class Program {
 public:
  Program(std::span<const Expr> outputs, std::vector<std::string> inputs,
          const Bindings& constants = {});

  std::size_t input_count() const { return inputs_.size(); }
  std::size_t output_count() const { return outputs_.size(); }
  std::size_t instruction_count() const { return code_.size(); }
  const std::vector<std::string>& inputs() const { return inputs_; }

  template <typename Scalar>
  void evaluate(std::span<const Scalar> inputs, std::span<Scalar> outputs) const;

  template <typename Scalar>
  std::vector<Scalar> evaluate(std::span<const Scalar> inputs) const {
    std::vector<Scalar> out(outputs_.size());
    evaluate<Scalar>(inputs, out);
    return out;
  }

 private:
  enum class OpCode : std::uint8_t { input, constant, negate, binary, call };
  struct Instruction {
    OpCode code;
    std::uint8_t sub;  // BinaryOp or Function
    std::uint32_t lhs;
    std::uint32_t rhs;
    double constant;
  };
  friend class ProgramBuilder;

  std::vector<Instruction> code_;
  std::vector<std::uint32_t> outputs_;
  std::vector<std::string> inputs_;
};

}  // namespace curvcheck

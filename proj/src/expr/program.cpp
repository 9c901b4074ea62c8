#include <bit>
#include <unordered_map>

#include "curvcheck/expr.hpp"
#include "expr/kernels.hpp"

namespace curvcheck {

class ProgramBuilder {
 public:
  ProgramBuilder(Program& program, const Bindings& constants)
      : program_(program), constants_(constants) {}

  std::uint32_t emit(const Expr& e) {
    if (auto it = by_node_.find(e.id()); it != by_node_.end()) return it->second;
    const std::uint32_t reg = std::visit([&](const auto& n) { return lower(n); },
                                         static_cast<const Node::variant&>(e.node()));
    by_node_.emplace(e.id(), reg);
    return reg;
  }

 private:
  using Instruction = Program::Instruction;
  using OpCode = Program::OpCode;

  struct Key {
    OpCode code;
    std::uint8_t sub;
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint64_t bits;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<std::uint64_t>{}(k.bits);
      auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
      mix(static_cast<std::size_t>(k.code));
      mix(k.sub);
      mix(k.lhs);
      mix(k.rhs);
      return h;
    }
  };

  std::uint32_t intern(const Instruction& ins) {
    const Key key{ins.code, ins.sub, ins.lhs, ins.rhs, std::bit_cast<std::uint64_t>(ins.constant)};
    if (auto it = by_key_.find(key); it != by_key_.end()) return it->second;
    const auto reg = static_cast<std::uint32_t>(program_.code_.size());
    program_.code_.push_back(ins);
    by_key_.emplace(key, reg);
    return reg;
  }

  std::uint32_t lower(const Constant& c) { return intern({OpCode::constant, 0, 0, 0, c.value}); }

  std::uint32_t lower(const Symbol& s) {
    const auto& inputs = program_.inputs_;
    for (std::size_t i = 0; i < inputs.size(); ++i)
      if (inputs[i] == s.name)
        return intern({OpCode::input, 0, static_cast<std::uint32_t>(i), 0, 0.0});
    if (auto it = constants_.find(s.name); it != constants_.end())
      return intern({OpCode::constant, 0, 0, 0, it->second});
    throw EvalError(EvalError::Kind::unbound_symbol, "unbound symbol '" + s.name + "'");
  }

  std::uint32_t lower(const Negate& n) {
    return intern({OpCode::negate, 0, emit(n.child), 0, 0.0});
  }

  std::uint32_t lower(const Binary& n) {
    const std::uint32_t l = emit(n.lhs);
    const std::uint32_t r = emit(n.rhs);
    return intern({OpCode::binary, static_cast<std::uint8_t>(n.op), l, r, 0.0});
  }

  std::uint32_t lower(const Call& n) {
    return intern({OpCode::call, static_cast<std::uint8_t>(n.function), emit(n.arg), 0, 0.0});
  }

  Program& program_;
  const Bindings& constants_;
  std::unordered_map<const void*, std::uint32_t> by_node_;
  std::unordered_map<Key, std::uint32_t, KeyHash> by_key_;
};

Program::Program(std::span<const Expr> outputs, std::vector<std::string> inputs,
                 const Bindings& constants)
    : inputs_(std::move(inputs)) {
  ProgramBuilder builder(*this, constants);
  outputs_.reserve(outputs.size());
  for (const Expr& e : outputs) outputs_.push_back(builder.emit(e));
}

template <typename Scalar>
void Program::evaluate(std::span<const Scalar> inputs, std::span<Scalar> outputs) const {
  if (inputs.size() != inputs_.size())
    throw std::invalid_argument("program expects " + std::to_string(inputs_.size()) + " inputs");
  if (outputs.size() != outputs_.size())
    throw std::invalid_argument("program produces " + std::to_string(outputs_.size()) +
                                " outputs");
  std::vector<Scalar> reg(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instruction& ins = code_[i];
    switch (ins.code) {
      case OpCode::input:
        reg[i] = inputs[ins.lhs];
        break;
      case OpCode::constant:
        reg[i] = Scalar(ins.constant);
        break;
      case OpCode::negate:
        reg[i] = detail::apply_negate(reg[ins.lhs]);
        break;
      case OpCode::binary:
        reg[i] = detail::apply_binary(static_cast<BinaryOp>(ins.sub), reg[ins.lhs], reg[ins.rhs]);
        break;
      case OpCode::call:
        reg[i] = detail::apply_function(static_cast<Function>(ins.sub), reg[ins.lhs]);
        break;
    }
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) outputs[k] = reg[outputs_[k]];
}

template void Program::evaluate<double>(std::span<const double>, std::span<double>) const;
template void Program::evaluate<long double>(std::span<const long double>,
                                             std::span<long double>) const;

}  // namespace curvcheck

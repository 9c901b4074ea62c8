#pragma once

// Scalar semantics shared by tree evaluation, compiled programs, and folding.

#include <cmath>
#include <string>

#include "curvcheck/expr.hpp"

namespace curvcheck::detail {

[[noreturn]] inline void domain_error(const std::string& what) {
  throw EvalError(EvalError::Kind::domain, what);
}

template <typename Scalar>
Scalar checked(Scalar value, const char* what) {
  if (!std::isfinite(value)) domain_error(std::string("non-finite result in ") + what);
  return value;
}

template <typename Scalar>
Scalar apply_binary(BinaryOp op, Scalar a, Scalar b) {
  switch (op) {
    case BinaryOp::add:
      return checked(a + b, "addition");
    case BinaryOp::subtract:
      return checked(a - b, "subtraction");
    case BinaryOp::multiply:
      return checked(a * b, "multiplication");
    case BinaryOp::divide:
      if (b == Scalar(0)) domain_error("division by zero");
      return checked(a / b, "division");
    case BinaryOp::power: {
      if (a == Scalar(0) && b < Scalar(0)) domain_error("zero raised to a negative power");
      if (a < Scalar(0) && std::trunc(b) != b)
        domain_error("negative base raised to a non-integer power");
      return checked(Scalar(std::pow(a, b)), "power");
    }
  }
  domain_error("unknown binary operator");
}

template <typename Scalar>
Scalar apply_function(Function f, Scalar x) {
  switch (f) {
    case Function::sin:
      return checked(Scalar(std::sin(x)), "sin");
    case Function::cos:
      return checked(Scalar(std::cos(x)), "cos");
    case Function::tan:
      return checked(Scalar(std::tan(x)), "tan");
    case Function::exp:
      return checked(Scalar(std::exp(x)), "exp");
    case Function::ln:
      if (!(x > Scalar(0))) domain_error("ln of a non-positive argument");
      return checked(Scalar(std::log(x)), "ln");
    case Function::sqrt:
      if (x < Scalar(0)) domain_error("sqrt of a negative argument");
      return checked(Scalar(std::sqrt(x)), "sqrt");
    case Function::abs:
      return checked(Scalar(std::abs(x)), "abs");
  }
  domain_error("unknown function");
}

template <typename Scalar>
Scalar apply_negate(Scalar x) {
  return checked(-x, "negation");
}

}  // namespace curvcheck::detail

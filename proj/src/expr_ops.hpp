#pragma once

// Scalar kernels shared by the tree evaluator and the tape so that both run
// the exact same floating-point operations.

#include <cmath>
#include <string_view>

namespace contactflow::detail {

enum class OpFailure { None, DivideByZero, LogNonPositive, NonRealPower };

inline OpFailure checked_div(double a, double b, double& out) {
  if (b == 0.0) return OpFailure::DivideByZero;
  out = a / b;
  return OpFailure::None;
}

inline OpFailure checked_log(double a, double& out) {
  if (!(a > 0.0)) return OpFailure::LogNonPositive;
  out = std::log(a);
  return OpFailure::None;
}

inline OpFailure checked_pow(double base, double exponent, double& out) {
  out = std::pow(base, exponent);
  if (std::isfinite(base) && !std::isfinite(out)) return OpFailure::NonRealPower;
  return OpFailure::None;
}

inline std::string_view describe(OpFailure f) {
  switch (f) {
    case OpFailure::DivideByZero:
      return "division by zero";
    case OpFailure::LogNonPositive:
      return "log of a non-positive value";
    case OpFailure::NonRealPower:
      return "power without a finite real value";
    case OpFailure::None:
      break;
  }
  return "ok";
}

}  // namespace contactflow::detail

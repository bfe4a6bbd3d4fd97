#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "contactflow/expr.hpp"

namespace contactflow {

/// Flat postfix program compiled from an Expr.
///
/// Variables are resolved to slot indices of a fixed layout at compile time.
/// Instructions are emitted in the same order the tree evaluator visits the
/// nodes, so tape and tree agree bit for bit.
class EvalTape {
 public:
  enum class OpCode : std::uint8_t { Push, Load, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Neg };

  struct Instruction {
    OpCode op;
    std::uint32_t index;  // slot for Load, node-text index for fallible ops
    double operand;       // constant for Push, exponent for Pow
  };

  EvalTape() = default;

  /// `slots[i]` holds the value of `layout()[i]`.
  double eval(std::span<const double> slots) const;

  std::span<const Instruction> instructions() const { return code_; }
  const std::vector<std::string>& layout() const { return layout_; }
  std::size_t max_stack() const { return max_stack_; }

 private:
  friend EvalTape compile(const Expr& e, std::span<const std::string> layout);

  std::vector<Instruction> code_;
  std::vector<std::string> layout_;
  std::vector<std::string> node_text_;
  std::size_t max_stack_ = 0;
};

/// Throws UnknownIdentifier when a free variable of `e` is not in `layout`.
EvalTape compile(const Expr& e, std::span<const std::string> layout);

}  // namespace contactflow

#include "contactflow/tape.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "contactflow/errors.hpp"
#include "expr_ops.hpp"

namespace contactflow {

EvalTape compile(const Expr& e, std::span<const std::string> layout) {
  EvalTape tape;
  tape.layout_.assign(layout.begin(), layout.end());
  std::size_t depth = 0;

  auto fallible = [&](const Expr& node) {
    tape.node_text_.push_back(to_string(node));
    return static_cast<std::uint32_t>(tape.node_text_.size() - 1);
  };
  auto push = [&](EvalTape::Instruction ins, int stack_delta) {
    tape.code_.push_back(ins);
    depth = static_cast<std::size_t>(static_cast<long>(depth) + stack_delta);
    tape.max_stack_ = std::max(tape.max_stack_, depth);
  };

  using Op = EvalTape::OpCode;
  auto emit = [&](auto&& self, const Expr& n) -> void {
    switch (n.kind()) {
      case Expr::Kind::Constant:
        push({Op::Push, 0, n.value()}, +1);
        return;
      case Expr::Kind::Variable: {
        const auto it = std::find(layout.begin(), layout.end(), n.name());
        if (it == layout.end()) throw UnknownIdentifier(n.name());
        push({Op::Load, static_cast<std::uint32_t>(it - layout.begin()), 0.0}, +1);
        return;
      }
      case Expr::Kind::Binary: {
        if (n.binary_op() == BinaryOp::Pow) {
          self(self, n.lhs());
          push({Op::Pow, fallible(n), n.rhs().value()}, 0);
          return;
        }
        self(self, n.lhs());
        self(self, n.rhs());
        switch (n.binary_op()) {
          case BinaryOp::Add: push({Op::Add, 0, 0.0}, -1); break;
          case BinaryOp::Sub: push({Op::Sub, 0, 0.0}, -1); break;
          case BinaryOp::Mul: push({Op::Mul, 0, 0.0}, -1); break;
          case BinaryOp::Div: push({Op::Div, fallible(n), 0.0}, -1); break;
          case BinaryOp::Pow: break;
        }
        return;
      }
      case Expr::Kind::Unary: {
        self(self, n.arg());
        switch (n.unary_fn()) {
          case UnaryFn::Sin: push({Op::Sin, 0, 0.0}, 0); break;
          case UnaryFn::Cos: push({Op::Cos, 0, 0.0}, 0); break;
          case UnaryFn::Exp: push({Op::Exp, 0, 0.0}, 0); break;
          case UnaryFn::Log: push({Op::Log, fallible(n), 0.0}, 0); break;
          case UnaryFn::Neg: push({Op::Neg, 0, 0.0}, 0); break;
        }
        return;
      }
    }
  };
  emit(emit, e);
  return tape;
}

double EvalTape::eval(std::span<const double> slots) const {
  using detail::OpFailure;
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack;
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_stack_ > kInline) {
    heap_stack.resize(max_stack_);
    stack = heap_stack.data();
  }

  std::size_t top = 0;  // number of live entries
  for (const Instruction& ins : code_) {
    OpFailure f = OpFailure::None;
    switch (ins.op) {
      case OpCode::Push: stack[top++] = ins.operand; break;
      case OpCode::Load: stack[top++] = slots[ins.index]; break;
      case OpCode::Add: --top; stack[top - 1] = stack[top - 1] + stack[top]; break;
      case OpCode::Sub: --top; stack[top - 1] = stack[top - 1] - stack[top]; break;
      case OpCode::Mul: --top; stack[top - 1] = stack[top - 1] * stack[top]; break;
      case OpCode::Div: --top; f = detail::checked_div(stack[top - 1], stack[top], stack[top - 1]); break;
      case OpCode::Pow: f = detail::checked_pow(stack[top - 1], ins.operand, stack[top - 1]); break;
      case OpCode::Sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case OpCode::Cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case OpCode::Exp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case OpCode::Log: f = detail::checked_log(stack[top - 1], stack[top - 1]); break;
      case OpCode::Neg: stack[top - 1] = -stack[top - 1]; break;
    }
    if (f != OpFailure::None) throw DomainError(node_text_[ins.index], std::string(detail::describe(f)));
  }
  return top == 0 ? 0.0 : stack[0];
}

}  // namespace contactflow

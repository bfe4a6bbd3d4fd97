#include "contactflow/expr.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "contactflow/errors.hpp"
#include "expr_ops.hpp"

namespace contactflow {

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::string name;
  BinaryOp bop = BinaryOp::Add;
  UnaryFn ufn = UnaryFn::Neg;
  // Leaves keep null children so that building the shared zero node does not recurse.
  Expr a{std::shared_ptr<const Node>{}};
  Expr b{std::shared_ptr<const Node>{}};
};

namespace {

const std::shared_ptr<const Expr::Node>& zero_node() {
  static const auto node = std::make_shared<const Expr::Node>();
  return node;
}

bool is_sum(const Expr& e) {
  return e.kind() == Expr::Kind::Binary &&
         (e.binary_op() == BinaryOp::Add || e.binary_op() == BinaryOp::Sub);
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Kind Expr::kind() const { return node_->kind; }

bool Expr::is_constant(double v) const { return is_constant() && node_->value == v; }

double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
BinaryOp Expr::binary_op() const { return node_->bop; }
UnaryFn Expr::unary_fn() const { return node_->ufn; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
const Expr& Expr::arg() const { return node_->a; }

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  using detail::OpFailure;
  if (lhs.is_constant() && rhs.is_constant()) {
    const double x = lhs.value();
    const double y = rhs.value();
    double folded = 0.0;
    OpFailure failure = OpFailure::None;
    switch (op) {
      case BinaryOp::Add: folded = x + y; break;
      case BinaryOp::Sub: folded = x - y; break;
      case BinaryOp::Mul: folded = x * y; break;
      case BinaryOp::Div: failure = detail::checked_div(x, y, folded); break;
      case BinaryOp::Pow: failure = detail::checked_pow(x, y, folded); break;
    }
    // Invalid folds stay symbolic so evaluation reports them.
    if (failure == OpFailure::None && std::isfinite(folded)) return constant(folded);
  }
  switch (op) {
    case BinaryOp::Add:
      if (rhs.is_constant(0.0)) return lhs;
      if (lhs.is_constant(0.0)) return rhs;
      break;
    case BinaryOp::Sub:
      if (rhs.is_constant(0.0)) return lhs;
      break;
    case BinaryOp::Mul:
      if (lhs.is_constant(0.0) || rhs.is_constant(0.0)) return constant(0.0);
      if (rhs.is_constant(1.0)) return lhs;
      if (lhs.is_constant(1.0)) return rhs;
      break;
    case BinaryOp::Div:
      if (rhs.is_constant(1.0)) return lhs;
      break;
    case BinaryOp::Pow:
      if (!rhs.is_constant()) {
        throw InputError("exponent must be a numeric constant, got '" + to_string(rhs) + "'");
      }
      if (rhs.is_constant(1.0)) return lhs;
      break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryFn fn, Expr arg) {
  if (arg.is_constant()) {
    const double x = arg.value();
    double folded = 0.0;
    bool ok = true;
    switch (fn) {
      case UnaryFn::Sin: folded = std::sin(x); break;
      case UnaryFn::Cos: folded = std::cos(x); break;
      case UnaryFn::Exp: folded = std::exp(x); break;
      case UnaryFn::Log: ok = detail::checked_log(x, folded) == detail::OpFailure::None; break;
      case UnaryFn::Neg: folded = -x; break;
    }
    if (ok && std::isfinite(folded)) return constant(folded);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->ufn = fn;
  n->a = std::move(arg);
  return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(UnaryFn::Neg, a); }
Expr pow(const Expr& base, double exponent) {
  return Expr::binary(BinaryOp::Pow, base, Expr::constant(exponent));
}
Expr sin(const Expr& a) { return Expr::unary(UnaryFn::Sin, a); }
Expr cos(const Expr& a) { return Expr::unary(UnaryFn::Cos, a); }
Expr exp(const Expr& a) { return Expr::unary(UnaryFn::Exp, a); }
Expr log(const Expr& a) { return Expr::unary(UnaryFn::Log, a); }

Expr differentiate(const Expr& e, std::string_view var) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return Expr::constant(0.0);
    case Expr::Kind::Variable:
      return Expr::constant(e.name() == var ? 1.0 : 0.0);
    case Expr::Kind::Binary: {
      const Expr& f = e.lhs();
      const Expr& g = e.rhs();
      switch (e.binary_op()) {
        case BinaryOp::Add:
          return differentiate(f, var) + differentiate(g, var);
        case BinaryOp::Sub:
          return differentiate(f, var) - differentiate(g, var);
        case BinaryOp::Mul:
          return differentiate(f, var) * g + f * differentiate(g, var);
        case BinaryOp::Div: {
          const Expr df = differentiate(f, var);
          const Expr dg = differentiate(g, var);
          if (dg.is_constant(0.0)) return df / g;
          return (df * g - f * dg) / (g * g);
        }
        case BinaryOp::Pow: {
          const double n = g.value();
          if (n == 0.0) return Expr::constant(0.0);
          return Expr::constant(n) * pow(f, n - 1.0) * differentiate(f, var);
        }
      }
      break;
    }
    case Expr::Kind::Unary: {
      const Expr& a = e.arg();
      const Expr da = differentiate(a, var);
      switch (e.unary_fn()) {
        case UnaryFn::Sin: return cos(a) * da;
        case UnaryFn::Cos: return -sin(a) * da;
        case UnaryFn::Exp: return e * da;
        case UnaryFn::Log: return da / a;
        case UnaryFn::Neg: return -da;
      }
      break;
    }
  }
  return Expr::constant(0.0);
}

double eval(const Expr& e, const EvalContext& ctx) {
  using detail::OpFailure;
  auto fail = [&](OpFailure f) { throw DomainError(to_string(e), std::string(detail::describe(f))); };
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.value();
    case Expr::Kind::Variable: {
      const auto it = ctx.find(e.name());
      if (it == ctx.end()) throw UnknownIdentifier(e.name());
      return it->second;
    }
    case Expr::Kind::Binary: {
      const double x = eval(e.lhs(), ctx);
      const double y = eval(e.rhs(), ctx);
      double out = 0.0;
      OpFailure f = OpFailure::None;
      switch (e.binary_op()) {
        case BinaryOp::Add: out = x + y; break;
        case BinaryOp::Sub: out = x - y; break;
        case BinaryOp::Mul: out = x * y; break;
        case BinaryOp::Div: f = detail::checked_div(x, y, out); break;
        case BinaryOp::Pow: f = detail::checked_pow(x, y, out); break;
      }
      if (f != OpFailure::None) fail(f);
      return out;
    }
    case Expr::Kind::Unary: {
      const double x = eval(e.arg(), ctx);
      double out = 0.0;
      switch (e.unary_fn()) {
        case UnaryFn::Sin: return std::sin(x);
        case UnaryFn::Cos: return std::cos(x);
        case UnaryFn::Exp: return std::exp(x);
        case UnaryFn::Neg: return -x;
        case UnaryFn::Log:
          if (const auto f = detail::checked_log(x, out); f != OpFailure::None) fail(f);
          return out;
      }
      break;
    }
  }
  return 0.0;
}

namespace {

// Printing precedence; higher binds tighter.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kNegation = 3;
constexpr int kPower = 4;
constexpr int kAtom = 5;

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return std::signbit(e.value()) ? kNegation : kAtom;
    case Expr::Kind::Variable:
      return kAtom;
    case Expr::Kind::Binary:
      switch (e.binary_op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return kSum;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          return kProduct;
        case BinaryOp::Pow:
          return kPower;
      }
      break;
    case Expr::Kind::Unary:
      return e.unary_fn() == UnaryFn::Neg ? kNegation : kAtom;
  }
  return kAtom;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string parenthesize(const Expr& e, bool wrap) {
  return wrap ? "(" + to_string(e) + ")" : to_string(e);
}

}  // namespace

std::string to_string(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return format_number(e.value());
    case Expr::Kind::Variable:
      return e.name();
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      const char* sym = "";
      switch (e.binary_op()) {
        case BinaryOp::Add: sym = " + "; break;
        case BinaryOp::Sub: sym = " - "; break;
        case BinaryOp::Mul: sym = "*"; break;
        case BinaryOp::Div: sym = "/"; break;
        case BinaryOp::Pow: sym = "^"; break;
      }
      if (e.binary_op() == BinaryOp::Pow) {
        return parenthesize(e.lhs(), precedence(e.lhs()) < kAtom) + sym +
               parenthesize(e.rhs(), precedence(e.rhs()) < kNegation);
      }
      return parenthesize(e.lhs(), precedence(e.lhs()) < p) + sym +
             parenthesize(e.rhs(), precedence(e.rhs()) <= p);
    }
    case Expr::Kind::Unary: {
      switch (e.unary_fn()) {
        case UnaryFn::Sin: return "sin(" + to_string(e.arg()) + ")";
        case UnaryFn::Cos: return "cos(" + to_string(e.arg()) + ")";
        case UnaryFn::Exp: return "exp(" + to_string(e.arg()) + ")";
        case UnaryFn::Log: return "log(" + to_string(e.arg()) + ")";
        case UnaryFn::Neg: return "-" + parenthesize(e.arg(), precedence(e.arg()) < kNegation);
      }
      break;
    }
  }
  return {};
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  std::function<void(const Expr&)> walk = [&](const Expr& n) {
    switch (n.kind()) {
      case Expr::Kind::Constant: break;
      case Expr::Kind::Variable: out.insert(n.name()); break;
      case Expr::Kind::Binary: walk(n.lhs()); walk(n.rhs()); break;
      case Expr::Kind::Unary: walk(n.arg()); break;
    }
  };
  walk(e);
  return out;
}

std::size_t node_count(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Binary: return 1 + node_count(e.lhs()) + node_count(e.rhs());
    case Expr::Kind::Unary: return 1 + node_count(e.arg());
    default: return 1;
  }
}

namespace {

void collect_summands(const Expr& e, bool negate, std::vector<Expr>& out) {
  if (e.kind() == Expr::Kind::Binary) {
    const Expr& l = e.lhs();
    const Expr& r = e.rhs();
    switch (e.binary_op()) {
      case BinaryOp::Add:
        collect_summands(l, negate, out);
        collect_summands(r, negate, out);
        return;
      case BinaryOp::Sub:
        collect_summands(l, negate, out);
        collect_summands(r, !negate, out);
        return;
      case BinaryOp::Div:
        if (r.is_constant() && is_sum(l)) {
          std::vector<Expr> inner;
          collect_summands(l, negate, inner);
          for (const auto& s : inner) out.push_back(s / r);
          return;
        }
        break;
      case BinaryOp::Mul:
        if (l.is_constant() && is_sum(r)) {
          std::vector<Expr> inner;
          collect_summands(r, negate, inner);
          for (const auto& s : inner) out.push_back(l * s);
          return;
        }
        if (r.is_constant() && is_sum(l)) {
          std::vector<Expr> inner;
          collect_summands(l, negate, inner);
          for (const auto& s : inner) out.push_back(s * r);
          return;
        }
        break;
      case BinaryOp::Pow:
        break;
    }
  } else if (e.kind() == Expr::Kind::Unary && e.unary_fn() == UnaryFn::Neg) {
    collect_summands(e.arg(), !negate, out);
    return;
  }
  out.push_back(negate ? -e : e);
}

}  // namespace

std::vector<Expr> top_level_summands(const Expr& e) {
  std::vector<Expr> out;
  collect_summands(e, false, out);
  return out;
}

}  // namespace contactflow

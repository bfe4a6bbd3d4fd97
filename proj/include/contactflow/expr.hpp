#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace contactflow {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class UnaryFn { Sin, Cos, Exp, Log, Neg };

/// Immutable symbolic expression over named real variables.
///
/// Nodes are shared and never mutated, so copies are cheap and an Expr can be
/// read from any number of threads. The factory functions apply constant
/// folding and the identities x*0 = 0, x*1 = x, x+0 = x, x-0 = x, x^1 = x;
/// nothing else is simplified.
class Expr {
 public:
  enum class Kind { Constant, Variable, Binary, Unary };

  struct Node;

  /// Constant zero.
  Expr();

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr unary(UnaryFn fn, Expr arg);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_constant(double value) const;

  double value() const;             // Constant only
  const std::string& name() const;  // Variable only
  BinaryOp binary_op() const;       // Binary only
  UnaryFn unary_fn() const;         // Unary only
  const Expr& lhs() const;          // Binary only
  const Expr& rhs() const;          // Binary only
  const Expr& arg() const;          // Unary only

  /// Identity of the shared node, not structural equality.
  bool same_node(const Expr& other) const { return node_ == other.node_; }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, double exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);

/// Variable name to value. Every free variable of an expression must be bound.
using EvalContext = std::map<std::string, double, std::less<>>;

/// Exact symbolic partial derivative with respect to `var`.
Expr differentiate(const Expr& e, std::string_view var);

/// Tree-walking evaluation. Throws DomainError on division by zero, log of a
/// non-positive argument or a non-real power; UnknownIdentifier on an unbound
/// variable.
double eval(const Expr& e, const EvalContext& ctx);

/// Text form that parses back to a structurally identical tree.
std::string to_string(const Expr& e);

std::set<std::string> free_variables(const Expr& e);

/// Number of nodes in the tree (shared sub-trees counted once per use).
std::size_t node_count(const Expr& e);

/// Flattens top-level sums and distributes constant factors and constant
/// divisors over inner sums: (a+b)/2 + c -> [a/2, b/2, c].
std::vector<Expr> top_level_summands(const Expr& e);

/// Parses one expression. Grammar (lowest to highest precedence):
///
///     expr    = term { ("+" | "-") term }
///     term    = unary { ("*" | "/") unary }
///     unary   = ("-" | "+") unary | power
///     power   = primary [ "^" unary ]          (right-associative)
///     primary = number | name | func "(" expr ")" | "(" expr ")"
///     func    = "sin" | "cos" | "exp" | "log"
///
/// The exponent of "^" must fold to a numeric constant. Identifiers must
/// appear in `declared_names`.
Expr parse(std::string_view source, std::span<const std::string> declared_names);

}  // namespace contactflow

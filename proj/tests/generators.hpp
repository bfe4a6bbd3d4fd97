#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "contactflow/expr.hpp"
#include "contactflow/types.hpp"

namespace testgen {

/// Random expressions that are defined everywhere on the real line: divisors
/// and log arguments are kept strictly positive.
class ExprGenerator {
 public:
  ExprGenerator(std::vector<std::string> names, std::uint64_t seed) : names_(std::move(names)), rng_(seed) {}

  contactflow::Expr operator()(int depth = 4) {
    using contactflow::Expr;
    if (depth == 0 || pick(4) == 0) return leaf();
    const Expr a = (*this)(depth - 1);
    switch (pick(9)) {
      case 0: return a + (*this)(depth - 1);
      case 1: return a - (*this)(depth - 1);
      case 2: return a * (*this)(depth - 1);
      case 3: return a / (Expr::constant(1.5) + pow(a, 2.0));
      case 4: return pow(a, static_cast<double>(pick(3) + 2));
      case 5: return sin(a);
      case 6: return cos(a);
      case 7: return exp(Expr::constant(0.25) * sin(a));
      default: return log(Expr::constant(1.0) + pow(a, 2.0));
    }
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  contactflow::EvalContext context(double lo = -2.0, double hi = 2.0) {
    contactflow::EvalContext ctx;
    for (const auto& n : names_) ctx[n] = uniform(lo, hi);
    return ctx;
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  contactflow::Expr leaf() {
    using contactflow::Expr;
    if (pick(3) == 0) return Expr::constant(std::round(uniform(-3.0, 3.0) * 4.0) / 4.0);
    return Expr::variable(names_[static_cast<std::size_t>(pick(static_cast<int>(names_.size())))]);
  }

  std::vector<std::string> names_;
  std::mt19937_64 rng_;
};

}  // namespace testgen

#pragma once

#include <vector>

#include "contactflow/hamiltonian_system.hpp"

namespace contactflow {

/// Contact Hamiltonian vector field X_{H_i} at x (i = 0 drift, 1..d noise).
inline Vector contact_vector_field(const HamiltonianSystem& sys, Index i, const ContactState& x) {
  return sys.vector_field(i, x);
}

struct IntrinsicResiduals {
  double contraction = 0.0;  // |eta(X) - sigma H|
  double differential = 0.0;  // |dH - (-sigma iota_X d(eta) + R(H) eta)|_inf
};

/// Residuals of iota_X eta = sigma H and dH = -sigma iota_X d(eta) + R(H) eta.
IntrinsicResiduals check_intrinsic_relations(const HamiltonianSystem& sys, Index i, const ContactState& x);

/// Symbolic Jacobi bracket
///
///     [f, g] = -d(eta)(X_g, X_f) + f R(g) - g R(f).
Expr jacobi_bracket_expr(const Chart& chart, const Expr& f, const Expr& g);

double jacobi_bracket(const HamiltonianSystem& sys, const Expr& f, const Expr& g, const ContactState& x);

/// iota_R df at x.
double reeb_derivative(const HamiltonianSystem& sys, const Expr& f, const ContactState& x);

struct BracketExtreme {
  std::size_t i = 0;
  std::size_t j = 0;
  double max_abs = 0.0;
};

struct IntegrabilityReport {
  double max_pair_bracket = 0.0;      // max |[h_i, h_j]|, 1 <= i < j
  double max_reeb_bracket = 0.0;      // max |[h_i, 1]|
  double min_singular_value = 0.0;    // of the (n+1) x (2n+1) field matrix
  bool involution_pass = false;
  bool independence_pass = false;
  bool pass = false;
  std::vector<BracketExtreme> pairs;  // every (i, j), i < j, including h_0 = 1
  std::size_t samples = 0;
  double tolerance = 0.0;

  static constexpr double kIndependenceThreshold = 1e-6;
};

/// Checks that `integrals` = {1, h_1, ..., h_n} are in involution and
/// independent at every sample. Throws WrongIntegralCount unless there are
/// exactly n+1 integrals and the first is the constant 1.
IntegrabilityReport check_integrability(const HamiltonianSystem& sys, const std::vector<Expr>& integrals,
                                        const std::vector<ContactState>& samples, double tol);

/// Residuals of two candidate weak Leibniz rules at x:
///   printed: [f, gh] - ([f,g] h + g [f,h] - [f,1])
///   scaled:  [f, gh] - ([f,g] h + g [f,h] - g h [f,1])
struct WeakLeibnizDiagnostic {
  double printed_residual = 0.0;
  double scaled_residual = 0.0;
};

WeakLeibnizDiagnostic weak_leibniz(const HamiltonianSystem& sys, const Expr& f, const Expr& g, const Expr& h,
                                   const ContactState& x);

}  // namespace contactflow

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "contactflow/chart.hpp"
#include "contactflow/expr.hpp"
#include "contactflow/stochastic_system.hpp"
#include "contactflow/tape.hpp"

namespace contactflow {

using Constants = std::map<std::string, double, std::less<>>;

/// Stochastic contact Hamiltonian system on one chart:
///
///     dx = X_{H_0}(x) dt + sum_{k=1..d} X_{H_k}(x) o dB^k
///
/// Vector fields, their state Jacobians and the Reeb derivatives R(H_k) are
/// derived symbolically at construction and compiled to tapes over the slot
/// layout [chart coordinates..., constant names...].
class HamiltonianSystem {
 public:
  HamiltonianSystem(Chart chart, Expr drift_hamiltonian, std::vector<Expr> noise_hamiltonians,
                    Constants constants = {});

  /// Parses every Hamiltonian against the chart coordinates and constant names.
  static HamiltonianSystem from_sources(Chart chart, std::string_view drift_source,
                                        const std::vector<std::string>& noise_sources,
                                        Constants constants = {});

  const Chart& chart() const { return chart_; }
  Index dimension() const { return chart_.dimension(); }
  Index noise_dimension() const { return static_cast<Index>(fields_.size()) - 1; }
  const Constants& constants() const { return constants_; }

  /// 0 is the drift Hamiltonian, 1..d the noise Hamiltonians.
  const Expr& hamiltonian(Index i) const { return at(i).hamiltonian; }
  const std::vector<Expr>& vector_field_expr(Index i) const { return at(i).field; }

  /// Chart coordinates followed by constant names.
  const std::vector<std::string>& declared_names() const { return names_; }
  Expr parse(std::string_view source) const;

  Vector vector_field(Index i, const ContactState& x) const;
  Matrix vector_field_jacobian(Index i, const ContactState& x) const;
  double reeb_derivative(Index i, const ContactState& x) const;

  /// Evaluates an arbitrary expression over coordinates and constants.
  double evaluate(const Expr& e, const ContactState& x) const;
  EvalContext context(const ContactState& x) const;

  void coefficients(const ContactState& x, Coefficients& out, bool tangent) const;

 private:
  struct Compiled {
    Expr hamiltonian;
    std::vector<Expr> field;
    Expr reeb;
    std::vector<EvalTape> field_tapes;
    std::vector<EvalTape> jacobian_tapes;  // row-major
    EvalTape reeb_tape;
  };

  const Compiled& at(Index i) const;
  /// Validates x and writes coordinates and constants into `slots`.
  void fill_slots(const ContactState& x, std::vector<double>& slots) const;

  Chart chart_;
  Constants constants_;
  std::vector<std::string> names_;
  std::vector<Compiled> fields_;
};

static_assert(StratonovichSystem<HamiltonianSystem>);

}  // namespace contactflow

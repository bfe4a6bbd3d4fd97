#include "contactflow/bracket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contactflow/errors.hpp"

namespace contactflow {

IntrinsicResiduals check_intrinsic_relations(const HamiltonianSystem& sys, Index i, const ContactState& x) {
  const Chart& chart = sys.chart();
  const Vector field = sys.vector_field(i, x);
  const Vector eta = chart.eta(x);
  const Matrix deta = chart.deta(x);
  const EvalContext ctx = sys.context(x);
  const Expr& h = sys.hamiltonian(i);
  const double sigma = chart.sign();

  const double h_value = eval(h, ctx);
  Vector dh(sys.dimension());
  for (Index c = 0; c < dh.size(); ++c) {
    dh[c] = eval(differentiate(h, chart.coordinates()[static_cast<std::size_t>(c)]), ctx);
  }
  const double reeb_h = sys.reeb_derivative(i, x);

  IntrinsicResiduals r;
  r.contraction = std::abs(eta.dot(field) - sigma * h_value);
  // iota_X d(eta) as a covector: component b = sum_a X^a d(eta)(e_a, e_b)
  const Vector iota = deta.transpose() * field;
  r.differential = (dh - (-sigma * iota + reeb_h * eta)).cwiseAbs().maxCoeff();
  return r;
}

Expr jacobi_bracket_expr(const Chart& chart, const Expr& f, const Expr& g) {
  const std::vector<Expr> xf = chart.vector_field(f);
  const std::vector<Expr> xg = chart.vector_field(g);
  const std::vector<Expr>& deta = chart.deta_expr();
  const auto dim = static_cast<std::size_t>(chart.dimension());

  Expr pairing = Expr::constant(0.0);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      const Expr& w = deta[a * dim + b];
      if (w.is_constant(0.0)) continue;
      pairing = pairing + xg[a] * w * xf[b];
    }
  }
  return -pairing + f * chart.reeb_derivative(g) - g * chart.reeb_derivative(f);
}

double jacobi_bracket(const HamiltonianSystem& sys, const Expr& f, const Expr& g, const ContactState& x) {
  return sys.evaluate(jacobi_bracket_expr(sys.chart(), f, g), x);
}

double reeb_derivative(const HamiltonianSystem& sys, const Expr& f, const ContactState& x) {
  return sys.evaluate(sys.chart().reeb_derivative(f), x);
}

IntegrabilityReport check_integrability(const HamiltonianSystem& sys, const std::vector<Expr>& integrals,
                                        const std::vector<ContactState>& samples, double tol) {
  const Chart& chart = sys.chart();
  const auto expected = static_cast<std::size_t>(chart.half_dimension() + 1);
  if (integrals.size() != expected) {
    throw WrongIntegralCount("expected " + std::to_string(expected) + " integrals (h0 = 1 first), got " +
                             std::to_string(integrals.size()));
  }
  if (!integrals.front().is_constant(1.0)) {
    throw WrongIntegralCount("the first integral must be the constant 1");
  }

  const auto& names = sys.declared_names();
  std::vector<std::vector<EvalTape>> field_tapes;
  for (const Expr& h : integrals) {
    std::vector<EvalTape> tapes;
    for (const Expr& c : chart.vector_field(h)) tapes.push_back(compile(c, names));
    field_tapes.push_back(std::move(tapes));
  }

  IntegrabilityReport report;
  report.tolerance = tol;
  report.samples = samples.size();
  std::vector<EvalTape> bracket_tapes;
  for (std::size_t i = 0; i < integrals.size(); ++i) {
    for (std::size_t j = i + 1; j < integrals.size(); ++j) {
      report.pairs.push_back({i, j, 0.0});
      bracket_tapes.push_back(compile(jacobi_bracket_expr(chart, integrals[i], integrals[j]), names));
    }
  }

  report.min_singular_value = samples.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  std::vector<double> slots(names.size());
  for (const ContactState& x : samples) {
    chart.check_state(x);
    std::copy(x.data(), x.data() + x.size(), slots.begin());
    std::size_t k = static_cast<std::size_t>(x.size());
    for (const auto& [name, value] : sys.constants()) slots[k++] = value;

    for (std::size_t p = 0; p < report.pairs.size(); ++p) {
      report.pairs[p].max_abs = std::max(report.pairs[p].max_abs, std::abs(bracket_tapes[p].eval(slots)));
    }
    Matrix fields(static_cast<Index>(integrals.size()), sys.dimension());
    for (std::size_t i = 0; i < integrals.size(); ++i) {
      for (Index c = 0; c < sys.dimension(); ++c) {
        fields(static_cast<Index>(i), c) = field_tapes[i][static_cast<std::size_t>(c)].eval(slots);
      }
    }
    Eigen::JacobiSVD<Matrix> svd(fields);
    report.min_singular_value = std::min(report.min_singular_value, svd.singularValues().minCoeff());
  }

  for (const auto& pair : report.pairs) {
    if (pair.i == 0) {
      // [1, h_j] = -[h_j, 1]
      report.max_reeb_bracket = std::max(report.max_reeb_bracket, pair.max_abs);
    } else {
      report.max_pair_bracket = std::max(report.max_pair_bracket, pair.max_abs);
    }
  }
  report.involution_pass = report.max_pair_bracket <= tol && report.max_reeb_bracket <= tol;
  report.independence_pass = report.min_singular_value > IntegrabilityReport::kIndependenceThreshold;
  report.pass = report.involution_pass && report.independence_pass;
  return report;
}

WeakLeibnizDiagnostic weak_leibniz(const HamiltonianSystem& sys, const Expr& f, const Expr& g, const Expr& h,
                                   const ContactState& x) {
  const Chart& chart = sys.chart();
  const Expr one = Expr::constant(1.0);
  const double lhs = sys.evaluate(jacobi_bracket_expr(chart, f, g * h), x);
  const double fg = sys.evaluate(jacobi_bracket_expr(chart, f, g), x);
  const double fh = sys.evaluate(jacobi_bracket_expr(chart, f, h), x);
  const double f1 = sys.evaluate(jacobi_bracket_expr(chart, f, one), x);
  const double gv = sys.evaluate(g, x);
  const double hv = sys.evaluate(h, x);

  WeakLeibnizDiagnostic out;
  out.printed_residual = std::abs(lhs - (fg * hv + gv * fh - f1));
  out.scaled_residual = std::abs(lhs - (fg * hv + gv * fh - gv * hv * f1));
  return out;
}

}  // namespace contactflow

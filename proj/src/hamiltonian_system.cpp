#include "contactflow/hamiltonian_system.hpp"

#include <algorithm>

#include "contactflow/errors.hpp"

namespace contactflow {

HamiltonianSystem::HamiltonianSystem(Chart chart, Expr drift_hamiltonian,
                                     std::vector<Expr> noise_hamiltonians, Constants constants)
    : chart_(std::move(chart)), constants_(std::move(constants)) {
  names_ = chart_.coordinates();
  for (const auto& [name, value] : constants_) {
    if (std::find(names_.begin(), names_.end(), name) != names_.end()) {
      throw InputError("constant '" + name + "' shadows a chart coordinate");
    }
    names_.push_back(name);
  }

  std::vector<Expr> all;
  all.reserve(noise_hamiltonians.size() + 1);
  all.push_back(std::move(drift_hamiltonian));
  for (auto& h : noise_hamiltonians) all.push_back(std::move(h));

  const auto dim = static_cast<std::size_t>(chart_.dimension());
  for (const Expr& h : all) {
    for (const auto& v : free_variables(h)) {
      if (std::find(names_.begin(), names_.end(), v) == names_.end()) throw UnknownIdentifier(v);
    }
    Compiled c;
    c.hamiltonian = h;
    c.field = chart_.vector_field(h);
    c.reeb = chart_.reeb_derivative(h);
    for (const Expr& component : c.field) {
      c.field_tapes.push_back(compile(component, names_));
      for (std::size_t col = 0; col < dim; ++col) {
        c.jacobian_tapes.push_back(compile(differentiate(component, chart_.coordinates()[col]), names_));
      }
    }
    c.reeb_tape = compile(c.reeb, names_);
    fields_.push_back(std::move(c));
  }
}

HamiltonianSystem HamiltonianSystem::from_sources(Chart chart, std::string_view drift_source,
                                                  const std::vector<std::string>& noise_sources,
                                                  Constants constants) {
  std::vector<std::string> names = chart.coordinates();
  for (const auto& [name, value] : constants) names.push_back(name);
  Expr drift = contactflow::parse(drift_source, names);
  std::vector<Expr> noise;
  for (const auto& src : noise_sources) noise.push_back(contactflow::parse(src, names));
  return HamiltonianSystem(std::move(chart), std::move(drift), std::move(noise), std::move(constants));
}

Expr HamiltonianSystem::parse(std::string_view source) const { return contactflow::parse(source, names_); }

const HamiltonianSystem::Compiled& HamiltonianSystem::at(Index i) const {
  if (i < 0 || i >= static_cast<Index>(fields_.size())) {
    throw InputError("Hamiltonian index " + std::to_string(i) + " out of range");
  }
  return fields_[static_cast<std::size_t>(i)];
}

void HamiltonianSystem::fill_slots(const ContactState& x, std::vector<double>& slots) const {
  chart_.check_state(x);
  slots.resize(names_.size());
  std::copy(x.data(), x.data() + x.size(), slots.begin());
  std::size_t k = static_cast<std::size_t>(x.size());
  for (const auto& [name, value] : constants_) slots[k++] = value;
}

Vector HamiltonianSystem::vector_field(Index i, const ContactState& x) const {
  const Compiled& c = at(i);
  std::vector<double> slots;
  fill_slots(x, slots);
  Vector out(dimension());
  for (Index r = 0; r < dimension(); ++r) out[r] = c.field_tapes[static_cast<std::size_t>(r)].eval(slots);
  return out;
}

Matrix HamiltonianSystem::vector_field_jacobian(Index i, const ContactState& x) const {
  const Compiled& c = at(i);
  std::vector<double> slots;
  fill_slots(x, slots);
  const Index dim = dimension();
  Matrix out(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index col = 0; col < dim; ++col) {
      out(r, col) = c.jacobian_tapes[static_cast<std::size_t>(r * dim + col)].eval(slots);
    }
  }
  return out;
}

double HamiltonianSystem::reeb_derivative(Index i, const ContactState& x) const {
  std::vector<double> slots;
  fill_slots(x, slots);
  return at(i).reeb_tape.eval(slots);
}

EvalContext HamiltonianSystem::context(const ContactState& x) const {
  chart_.check_state(x);
  EvalContext ctx(constants_.begin(), constants_.end());
  for (Index i = 0; i < x.size(); ++i) ctx[chart_.coordinates()[static_cast<std::size_t>(i)]] = x[i];
  return ctx;
}

double HamiltonianSystem::evaluate(const Expr& e, const ContactState& x) const {
  return eval(e, context(x));
}

void HamiltonianSystem::coefficients(const ContactState& x, Coefficients& out, bool tangent) const {
  std::vector<double> slots;
  fill_slots(x, slots);
  const Index dim = dimension();
  const Index d = noise_dimension();

  auto eval_field = [&](const Compiled& c, auto&& column) {
    for (Index r = 0; r < dim; ++r) column[r] = c.field_tapes[static_cast<std::size_t>(r)].eval(slots);
  };
  auto eval_jacobian = [&](const Compiled& c, Matrix& m) {
    m.resize(dim, dim);
    for (Index r = 0; r < dim; ++r) {
      for (Index col = 0; col < dim; ++col) {
        m(r, col) = c.jacobian_tapes[static_cast<std::size_t>(r * dim + col)].eval(slots);
      }
    }
  };

  out.drift.resize(dim);
  eval_field(fields_[0], out.drift);
  out.diffusion.resize(dim, d);
  for (Index k = 0; k < d; ++k) eval_field(fields_[static_cast<std::size_t>(k + 1)], out.diffusion.col(k));

  if (!tangent) return;
  eval_jacobian(fields_[0], out.drift_jacobian);
  out.diffusion_jacobians.resize(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k) {
    eval_jacobian(fields_[static_cast<std::size_t>(k + 1)], out.diffusion_jacobians[static_cast<std::size_t>(k)]);
  }
  out.drift_reeb = fields_[0].reeb_tape.eval(slots);
  out.diffusion_reeb.resize(d);
  for (Index k = 0; k < d; ++k) out.diffusion_reeb[k] = fields_[static_cast<std::size_t>(k + 1)].reeb_tape.eval(slots);
}

}  // namespace contactflow

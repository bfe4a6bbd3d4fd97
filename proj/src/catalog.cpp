#include "contactflow/catalog.hpp"

#include <cmath>
#include <numbers>

#include "contactflow/errors.hpp"
#include "contactflow/integrator.hpp"

namespace contactflow {

HamiltonianSystem dissipative_system(double m, double gamma, double eps, std::string_view potential) {
  if (!(m > 0.0)) throw InputError("dissipative system needs m > 0");
  if (!(gamma > 0.0)) throw InputError("dissipative system needs gamma > 0");
  const Chart chart = Chart::darboux(2);
  const Constants constants{{"m", m}, {"gamma", gamma}, {"eps", eps}};
  std::vector<std::string> names = chart.coordinates();
  for (const auto& [name, value] : constants) names.push_back(name);

  const Expr v = parse(potential, names);
  const Expr kinetic = parse("(p1^2 + p2^2)/(2*m)", names);
  const Expr friction = parse("gamma*z", names);
  const Expr noise = parse("-eps", names);
  return HamiltonianSystem(chart, kinetic + v + friction, {noise}, constants);
}

HamiltonianSystem sasaki_einstein_system() {
  return HamiltonianSystem::from_sources(Chart::sasaki_einstein(), "1",
                                         {"1", "cos(theta1)/3", "cos(theta2)/3", "phi1", "phi2"});
}

namespace {

double number_or(const CatalogParameters& p, std::string_view name, double fallback) {
  const auto it = p.numbers.find(name);
  return it == p.numbers.end() ? fallback : it->second;
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries;

  CatalogEntry dissipative;
  dissipative.id = "dissipative-2d";
  dissipative.description =
      "Damped 2-d mechanical system H0 = |p|^2/(2m) + V(q) + gamma z with additive noise eps on z "
      "(noise Hamiltonian -eps). lambda = exp(-gamma (t - t0)).";
  dissipative.defaults.numbers = {{"m", 1.0}, {"gamma", 0.5}, {"eps", 0.1}};
  dissipative.defaults.sources = {{"V", "(q1^2 + q2^2)/2"}};
  dissipative.default_state = (Vector(5) << 1.0, 0.0, 2.0, 0.0, 0.0).finished();
  dissipative.lambda_closed_form = "exp(-gamma*(t - t0))";
  dissipative.make = [defaults = dissipative.defaults](const CatalogParameters& p) {
    for (const auto& [name, value] : p.numbers) {
      if (!defaults.numbers.contains(name)) throw InputError("unknown parameter '" + name + "' for dissipative-2d");
    }
    for (const auto& [name, value] : p.sources) {
      if (!defaults.sources.contains(name)) throw InputError("unknown parameter '" + name + "' for dissipative-2d");
    }
    const auto v = p.sources.find("V");
    return dissipative_system(number_or(p, "m", 1.0), number_or(p, "gamma", 0.5), number_or(p, "eps", 0.1),
                              v == p.sources.end() ? defaults.sources.at("V") : v->second);
  };
  entries.push_back(std::move(dissipative));

  CatalogEntry se;
  se.id = "sasaki-einstein-t11";
  se.description =
      "T^{1,1} with eta = (dpsi + cos(theta1) dphi1 + cos(theta2) dphi2)/3; drift Hamiltonian 1, noise "
      "Hamiltonians 1, cos(theta1)/3, cos(theta2)/3, phi1, phi2. Strict contactomorphism (lambda = 1).";
  se.default_state = (Vector(5) << std::numbers::pi / 2, std::numbers::pi / 2, 0.0, 0.0, 0.0).finished();
  se.lambda_closed_form = "1";
  se.make = [](const CatalogParameters& p) {
    if (!p.numbers.empty() || !p.sources.empty()) {
      throw InputError("sasaki-einstein-t11 takes no parameters");
    }
    return sasaki_einstein_system();
  };
  entries.push_back(std::move(se));
  return entries;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

const CatalogEntry& catalog_entry(std::string_view id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return e;
  }
  throw InputError("unknown catalog system '" + std::string(id) + "'");
}

Vector ActionAngleMap::forward(const ContactState& x) {
  Vector a(5);
  a << std::cos(x[0]) / 3.0, std::cos(x[1]) / 3.0, x[2], x[3], x[4] / 3.0;
  return a;
}

ContactState ActionAngleMap::inverse(const Vector& a) {
  for (int i = 0; i < 2; ++i) {
    if (!(std::abs(3.0 * a[i]) < 1.0)) throw SingularChartPoint("action variable outside (-1/3, 1/3)");
  }
  ContactState x(5);
  x << std::acos(3.0 * a[0]), std::acos(3.0 * a[1]), a[2], a[3], 3.0 * a[4];
  return x;
}

Matrix ActionAngleMap::jacobian(const ContactState& x) {
  Matrix j = Matrix::Zero(5, 5);
  j(0, 0) = -std::sin(x[0]) / 3.0;
  j(1, 1) = -std::sin(x[1]) / 3.0;
  j(2, 2) = 1.0;
  j(3, 3) = 1.0;
  j(4, 4) = 1.0 / 3.0;
  return j;
}

Vector ActionAngleMap::contact_form(const Vector& a) {
  Vector eta = Vector::Zero(5);
  eta[2] = a[0];
  eta[3] = a[1];
  eta[4] = 1.0;
  return eta;
}

PushedCoefficients action_angle_pushforward(const HamiltonianSystem& sys, const ContactState& x) {
  if (sys.chart().kind() != ChartKind::SasakiEinstein) {
    throw InputError("action-angle pushforward needs the sasaki-einstein chart");
  }
  auto [drift, diffusion] = drift_diffusion(sys, x);
  const Matrix dphi = ActionAngleMap::jacobian(x);
  return {dphi * drift, dphi * diffusion};
}

PushedCoefficients tabulated_action_angle_coefficients(const Vector& a) {
  PushedCoefficients c;
  c.drift = Vector::Zero(5);
  c.drift[4] = 1.0;
  c.diffusion = Matrix::Zero(5, 5);
  c.diffusion(0, 3) = 1.0;
  c.diffusion(1, 4) = 1.0;
  c.diffusion(2, 1) = 1.0;
  c.diffusion(3, 2) = 1.0;
  c.diffusion(4, 0) = 1.0;
  c.diffusion(4, 3) = a[2];
  c.diffusion(4, 4) = a[3];
  return c;
}

}  // namespace contactflow

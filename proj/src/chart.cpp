#include "contactflow/chart.hpp"

#include <cmath>
#include <numbers>

#include "contactflow/errors.hpp"

namespace contactflow {

Chart Chart::darboux(int n) {
  if (n < 0) throw InputError("Darboux chart needs n >= 0");
  Chart c;
  c.kind_ = ChartKind::Darboux;
  c.n_ = n;
  c.sign_ = -1;
  for (int j = 1; j <= n; ++j) c.coordinates_.push_back("q" + std::to_string(j));
  for (int j = 1; j <= n; ++j) c.coordinates_.push_back("p" + std::to_string(j));
  c.coordinates_.push_back("z");

  const auto dim = static_cast<std::size_t>(2 * n + 1);
  c.eta_.assign(dim, Expr::constant(0.0));
  c.reeb_.assign(dim, Expr::constant(0.0));
  for (int j = 0; j < n; ++j) c.eta_[j] = -Expr::variable(c.coordinates_[n + j]);
  c.eta_[2 * n] = Expr::constant(1.0);
  c.reeb_[2 * n] = Expr::constant(1.0);
  c.compile_tapes();
  return c;
}

Chart Chart::sasaki_einstein() {
  Chart c;
  c.kind_ = ChartKind::SasakiEinstein;
  c.n_ = 2;
  c.sign_ = +1;
  c.coordinates_ = {"theta1", "theta2", "phi1", "phi2", "psi"};
  const Expr third = Expr::constant(1.0 / 3.0);
  c.eta_ = {Expr::constant(0.0), Expr::constant(0.0), third * cos(Expr::variable("theta1")),
            third * cos(Expr::variable("theta2")), third};
  c.reeb_ = {Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0),
             Expr::constant(3.0)};
  c.compile_tapes();
  return c;
}

Chart Chart::from_id(std::string_view id, int n) {
  if (id == "darboux") return darboux(n);
  if (id == "sasaki-einstein") return sasaki_einstein();
  throw InputError("unknown chart '" + std::string(id) + "'");
}

std::string Chart::id() const {
  return kind_ == ChartKind::Darboux ? "darboux" : "sasaki-einstein";
}

void Chart::compile_tapes() {
  const auto dim = static_cast<std::size_t>(dimension());
  // d(eta)(e_a, e_b) = d_a eta_b - d_b eta_a
  deta_.assign(dim * dim, Expr::constant(0.0));
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      deta_[a * dim + b] =
          differentiate(eta_[b], coordinates_[a]) - differentiate(eta_[a], coordinates_[b]);
    }
  }
  auto compile_all = [&](const std::vector<Expr>& exprs, std::vector<EvalTape>& tapes) {
    tapes.clear();
    for (const auto& e : exprs) tapes.push_back(compile(e, coordinates_));
  };
  compile_all(eta_, eta_tapes_);
  compile_all(deta_, deta_tapes_);
  compile_all(reeb_, reeb_tapes_);
}

void Chart::check_state(const ContactState& x) const {
  if (x.size() != dimension()) {
    throw InputError("state has " + std::to_string(x.size()) + " coordinates, chart '" + id() +
                     "' needs " + std::to_string(dimension()));
  }
  if (kind_ == ChartKind::SasakiEinstein) {
    for (int i = 0; i < 2; ++i) {
      if (std::abs(std::sin(x[i])) < kSingularSin) {
        throw SingularChartPoint("sin(" + coordinates_[i] + ") vanishes at theta = " +
                                 std::to_string(x[i]));
      }
    }
  }
}

ContactState Chart::wrap_angles(const ContactState& x) const {
  ContactState out = x;
  if (kind_ != ChartKind::SasakiEinstein) return out;
  const auto wrap = [](double v, double period) {
    const double r = std::fmod(v, period);
    return r < 0.0 ? r + period : r;
  };
  const double two_pi = 2.0 * std::numbers::pi;
  out[2] = wrap(x[2], two_pi);
  out[3] = wrap(x[3], two_pi);
  out[4] = wrap(x[4], 2.0 * two_pi);
  return out;
}

std::vector<Expr> Chart::vector_field(const Expr& h) const {
  const auto dim = static_cast<std::size_t>(dimension());
  std::vector<Expr> grad(dim);
  for (std::size_t i = 0; i < dim; ++i) grad[i] = differentiate(h, coordinates_[i]);
  std::vector<Expr> x(dim);

  if (kind_ == ChartKind::Darboux) {
    const std::size_t n = static_cast<std::size_t>(n_);
    const Expr& hz = grad[2 * n];
    Expr z_component = -h;
    for (std::size_t j = 0; j < n; ++j) {
      const Expr p = Expr::variable(coordinates_[n + j]);
      x[j] = grad[n + j];
      x[n + j] = -(grad[j] + p * hz);
      z_component = z_component + p * grad[n + j];
    }
    x[2 * n] = z_component;
    return x;
  }

  const Expr three = Expr::constant(3.0);
  const Expr& hpsi = grad[4];
  Expr psi_component = h;
  for (std::size_t i = 0; i < 2; ++i) {
    const Expr theta = Expr::variable(coordinates_[i]);
    const Expr& htheta = grad[i];
    const Expr& hphi = grad[2 + i];
    x[i] = three * (hphi - hpsi * cos(theta)) / sin(theta);
    x[2 + i] = -(three * htheta / sin(theta));
    psi_component = psi_component + cos(theta) / sin(theta) * htheta;
  }
  x[4] = three * psi_component;
  return x;
}

Expr Chart::reeb_derivative(const Expr& f) const {
  Expr out = Expr::constant(0.0);
  for (std::size_t i = 0; i < reeb_.size(); ++i) {
    out = out + reeb_[i] * differentiate(f, coordinates_[i]);
  }
  return out;
}

namespace {

Vector eval_all(const std::vector<EvalTape>& tapes, const ContactState& x) {
  Vector out(static_cast<Index>(tapes.size()));
  const std::span<const double> slots(x.data(), static_cast<std::size_t>(x.size()));
  for (std::size_t i = 0; i < tapes.size(); ++i) out[static_cast<Index>(i)] = tapes[i].eval(slots);
  return out;
}

}  // namespace

Vector Chart::eta(const ContactState& x) const {
  check_state(x);
  return eval_all(eta_tapes_, x);
}

Matrix Chart::deta(const ContactState& x) const {
  check_state(x);
  const Vector flat = eval_all(deta_tapes_, x);
  // flat is row-major
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), dimension(), dimension());
}

Vector Chart::reeb(const ContactState& x) const {
  check_state(x);
  return eval_all(reeb_tapes_, x);
}

double Chart::nondegeneracy(const ContactState& x) const {
  const Vector e = eta(x);
  if (n_ == 0) return e.norm();
  // Columns 1.. of a full QR of eta span its orthogonal complement, i.e. ker(eta).
  const Matrix column = e;
  Eigen::HouseholderQR<Matrix> qr(column);
  const Matrix q = qr.householderQ() * Matrix::Identity(dimension(), dimension());
  const Matrix kernel = q.rightCols(dimension() - 1);
  const Matrix restricted = kernel.transpose() * deta(x) * kernel;
  Eigen::JacobiSVD<Matrix> svd(restricted);
  return svd.singularValues().minCoeff();
}

}  // namespace contactflow

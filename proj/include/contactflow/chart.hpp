#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "contactflow/expr.hpp"
#include "contactflow/tape.hpp"
#include "contactflow/types.hpp"

namespace contactflow {

enum class ChartKind { Darboux, SasakiEinstein };

/// Coordinate model of a contact manifold.
///
/// Darboux(n): coordinates q1..qn, p1..pn, z with eta = dz - p dq and
/// Reeb field d/dz. Vector fields follow
///
///     X_H = H_p d/dq - (H_q + p H_z) d/dp + (p H_p - H) d/dz
///
/// for which eta(X_H) = -H, so the chart sign is -1.
///
/// SasakiEinstein: coordinates theta1, theta2, phi1, phi2, psi of T^{1,1}
/// with eta = (dpsi + cos(theta1) dphi1 + cos(theta2) dphi2) / 3 and Reeb
/// field 3 d/dpsi. Vector fields follow
///
///     X_H = 3 sum_i (H_phi_i - H_psi cos(theta_i)) / sin(theta_i) d/dtheta_i
///         - 3 sum_i H_theta_i / sin(theta_i) d/dphi_i
///         + 3 (H + sum_i cot(theta_i) H_theta_i) d/dpsi
///
/// for which eta(X_H) = +H, so the chart sign is +1.
///
/// All chart data is held symbolically so that brackets and vector-field
/// Jacobians can be differentiated exactly.
class Chart {
 public:
  static Chart darboux(int n);
  static Chart sasaki_einstein();
  /// "darboux" (with `n`) or "sasaki-einstein".
  static Chart from_id(std::string_view id, int n = 1);

  ChartKind kind() const { return kind_; }
  std::string id() const;
  /// Half-dimension n; the manifold has dimension 2n+1.
  int half_dimension() const { return n_; }
  Index dimension() const { return 2 * n_ + 1; }
  /// sigma in eta(X_H) = sigma * H.
  int sign() const { return sign_; }
  const std::vector<std::string>& coordinates() const { return coordinates_; }

  /// Throws InputError on a length mismatch, SingularChartPoint when
  /// |sin(theta_i)| < 1e-9 on the Sasaki-Einstein chart.
  void check_state(const ContactState& x) const;

  /// Angles reduced for reporting: phi_i to [0, 2 pi), psi to [0, 4 pi) on
  /// the Sasaki-Einstein chart. Integration itself never wraps.
  ContactState wrap_angles(const ContactState& x) const;

  std::vector<Expr> vector_field(const Expr& h) const;
  /// R(f) = iota_R df.
  Expr reeb_derivative(const Expr& f) const;

  const std::vector<Expr>& eta_expr() const { return eta_; }
  const std::vector<Expr>& reeb_expr() const { return reeb_; }
  /// Row-major (2n+1)^2 entries of d(eta), entry (i,j) = d(eta)(e_i, e_j).
  const std::vector<Expr>& deta_expr() const { return deta_; }

  Vector eta(const ContactState& x) const;
  Matrix deta(const ContactState& x) const;
  Vector reeb(const ContactState& x) const;

  /// Smallest singular value of d(eta) restricted to ker(eta); nonzero
  /// exactly when eta ^ (d eta)^n does not vanish at x.
  double nondegeneracy(const ContactState& x) const;

  static constexpr double kSingularSin = 1e-9;

 private:
  Chart() = default;
  void compile_tapes();

  ChartKind kind_ = ChartKind::Darboux;
  int n_ = 0;
  int sign_ = -1;
  std::vector<std::string> coordinates_;
  std::vector<Expr> eta_;
  std::vector<Expr> deta_;
  std::vector<Expr> reeb_;
  std::vector<EvalTape> eta_tapes_;
  std::vector<EvalTape> deta_tapes_;
  std::vector<EvalTape> reeb_tapes_;
};

}  // namespace contactflow

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contactflow/hamiltonian_system.hpp"

namespace contactflow {

/// Damped mechanical system on the Darboux chart with n = 2:
///
///     H_0 = (p1^2 + p2^2) / (2 m) + V(q) + gamma z,   H_1 = -eps
///
/// The constant noise Hamiltonian -eps gives dz = ... + eps o dB and leaves
/// q, p noise-free. The conformal factor is exp(-gamma (t - t0)).
/// `potential` is parsed over q1, q2, p1, p2, z, m, gamma, eps.
HamiltonianSystem dissipative_system(double m, double gamma, double eps,
                                     std::string_view potential = "(q1^2 + q2^2)/2");

/// T^{1,1} system: drift Hamiltonian 1 and noise Hamiltonians
/// 1, cos(theta1)/3, cos(theta2)/3, phi1, phi2. Every Hamiltonian is psi-free,
/// so the flow is a strict contactomorphism (lambda = 1).
HamiltonianSystem sasaki_einstein_system();

/// Named parameter overrides for a catalog factory.
struct CatalogParameters {
  std::map<std::string, double, std::less<>> numbers;
  std::map<std::string, std::string, std::less<>> sources;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  CatalogParameters defaults;
  ContactState default_state;
  /// Closed form of lambda over t, t0 and the system constants, if known.
  std::optional<std::string> lambda_closed_form;
  std::function<HamiltonianSystem(const CatalogParameters&)> make;
};

/// "dissipative-2d" and "sasaki-einstein-t11".
const std::vector<CatalogEntry>& catalog();
/// Throws InputError for an unknown id.
const CatalogEntry& catalog_entry(std::string_view id);

/// Explicit action-angle coordinates on T^{1,1}:
/// (y1, y2, vartheta1, vartheta2, vartheta0) =
/// (cos(theta1)/3, cos(theta2)/3, phi1, phi2, psi/3), with y0 = 1 implicit.
struct ActionAngleMap {
  static Vector forward(const ContactState& x);
  /// theta_i = acos(3 y_i) in (0, pi); requires |y_i| < 1/3.
  static ContactState inverse(const Vector& a);
  static Matrix jacobian(const ContactState& x);
  /// eta_0 = y0 dvartheta0 + y1 dvartheta1 + y2 dvartheta2 in action-angle order.
  static Vector contact_form(const Vector& a);
};

struct PushedCoefficients {
  Vector drift;
  Matrix diffusion;
};

/// Pushes the system's drift and diffusion through D(Phi) (ordinary chain
/// rule for Stratonovich differentials).
PushedCoefficients action_angle_pushforward(const HamiltonianSystem& sys, const ContactState& x);

/// Tabulated action-angle form of the T^{1,1} system: drift (0,0,0,0,1) and
///
///     [0 0 0 1 0        ]
///     [0 0 0 0 1        ]
///     [0 1 0 0 0        ]
///     [0 0 1 0 0        ]
///     [1 0 0 vt1 vt2    ]
///
/// The y rows carry +1 here while the chain-rule pushforward gives -1
/// (dy_i = -sin(theta_i)/3 dtheta_i); see README.
PushedCoefficients tabulated_action_angle_coefficients(const Vector& a);

}  // namespace contactflow

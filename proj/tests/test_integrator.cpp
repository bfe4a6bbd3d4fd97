#include <doctest.h>

#include <cmath>
#include <numbers>

#include "contactflow/catalog.hpp"
#include "contactflow/errors.hpp"
#include "contactflow/verification.hpp"

using namespace contactflow;

namespace {

double sup(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

const ContactState kDissipativeState{{1.0, 0.0, 2.0, 0.0, 0.0}};

double energy(const ContactState& x) { return 0.5 * (x[2] * x[2] + x[3] * x[3]) + 0.5 * (x[0] * x[0] + x[1] * x[1]); }

}  // namespace

TEST_CASE("drift and diffusion of the dissipative system") {
  const HamiltonianSystem sys = dissipative_system(1.0, 0.5, 0.1);
  const auto [a, b] = drift_diffusion(sys, kDissipativeState);
  CHECK(sup(a - Vector{{2.0, 0.0, -2.0, 0.0, 1.5}}) <= 1e-15);
  REQUIRE(b.cols() == 1);
  CHECK(sup(b.col(0) - Vector{{0.0, 0.0, 0.0, 0.0, 0.1}}) <= 1e-15);
}

TEST_CASE("zero Hamiltonians give zero coefficients and a fixed state") {
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(2), "0", {"0", "0"});
  const auto [a, b] = drift_diffusion(sys, kDissipativeState);
  CHECK(a.isZero(0.0));
  CHECK(b.isZero(0.0));
  const BrownianPath path = sample_brownian(2, 10, 0.1, 1, 0);
  for (Scheme s : {Scheme::EulerHeun, Scheme::StratonovichMidpoint}) {
    CHECK(integrate_final(sys, kDissipativeState, path, s) == kDissipativeState);
  }
}

TEST_CASE("step with zero increments and zero drift is the identity") {
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(1), "0", {"q1*p1 + z"});
  const ContactState x{{0.3, -0.7, 1.1}};
  for (Scheme s : {Scheme::EulerHeun, Scheme::StratonovichMidpoint}) {
    CHECK(step(sys, x, Vector::Zero(1), 0.01, s) == x);
  }
}

TEST_CASE("Heun reproduces the second-order Taylor step of a linear ODE") {
  // H = -z on Darboux(0) gives dz = z dt.
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(0), "-z", {});
  const double dt = 0.1;
  const ContactState next = step(sys, ContactState{{2.0}}, Vector(0), dt, Scheme::EulerHeun);
  CHECK(next[0] == doctest::Approx(2.0 * (1.0 + dt + dt * dt / 2)).epsilon(1e-15));
  // midpoint gives the Cayley factor (1 + dt/2) / (1 - dt/2)
  const ContactState mid = step(sys, ContactState{{2.0}}, Vector(0), dt, Scheme::StratonovichMidpoint);
  CHECK(mid[0] == doctest::Approx(2.0 * (1.0 + dt / 2) / (1.0 - dt / 2)).epsilon(1e-12));
}

TEST_CASE("dx = x o dB converges to the exponential solution") {
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(0), "0", {"-z"});
  std::vector<BrownianPath> paths;
  for (std::uint64_t s = 0; s < 50; ++s) paths.push_back(sample_brownian(1, 512, 1.0 / 512, 77, s));
  for (Scheme scheme : {Scheme::EulerHeun, Scheme::StratonovichMidpoint}) {
    const ConvergenceReport r =
        strong_convergence(sys, ContactState{{1.0}}, paths, scheme, {8, 4, 2, 1},
                           [](const BrownianPath& p) { return ContactState{{std::exp(p.total()[0])}}; });
    CHECK(r.errors.back() < 1e-2);
    CHECK(r.min_order() > 0.7);
  }
}

TEST_CASE("damped oscillator energy is nonincreasing without noise") {
  const HamiltonianSystem sys = dissipative_system(1.0, 0.5, 0.0);
  const BrownianPath path = sample_brownian(1, 5000, 1e-3, 3, 0);
  for (Scheme scheme : {Scheme::EulerHeun, Scheme::StratonovichMidpoint}) {
    const Trajectory traj = integrate(sys, kDissipativeState, path, scheme);
    bool monotone = true;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      const double prev = energy(traj.states[k - 1]);
      monotone = monotone && energy(traj.states[k]) <= prev * (1.0 + 1e-12);
    }
    CHECK(monotone);
    CHECK(energy(traj.states.back()) < 0.5 * energy(traj.states.front()));
  }
}

TEST_CASE("constant drift Hamiltonian 1 gives z = z0 - (t - t0)") {
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(1), "1", {});
  const BrownianPath path = sample_brownian(0, 100, 0.01, 0, 0, 2.0);
  const Trajectory traj = integrate(sys, ContactState{{0.5, -1.0, 3.0}}, path, Scheme::EulerHeun);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    CHECK(traj.states[k][0] == 0.5);
    CHECK(traj.states[k][1] == -1.0);
    CHECK(traj.states[k][2] == doctest::Approx(3.0 - (traj.times[k] - 2.0)).epsilon(1e-13));
  }
}

TEST_CASE("Sasaki-Einstein theta is constant when streams 4 and 5 are off") {
  const HamiltonianSystem sys = sasaki_einstein_system();
  const BrownianPath path = restrict_streams(sample_brownian(5, 1000, 1e-3, 5, 0), {0, 1, 2});
  const ContactState x0{{1.0, 2.0, 0.3, 0.4, 0.5}};
  const Trajectory traj = integrate(sys, x0, path, Scheme::EulerHeun);
  for (const auto& x : traj.states) {
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 2.0);
  }
  // phi_i and psi are Brownian: phi1 = phi1(0) + B2, psi = psi(0) + 3 t + 3 B1
  const Vector total = path.total();
  CHECK(traj.states.back()[2] == doctest::Approx(0.3 + total[1]).epsilon(1e-12));
  CHECK(traj.states.back()[4] == doctest::Approx(0.5 + 3.0 + 3.0 * total[0]).epsilon(1e-12));
}

TEST_CASE("augmented integration: initial state and conformal factor") {
  const HamiltonianSystem sys = dissipative_system(1.0, 0.5, 0.1);
  const BrownianPath path = sample_brownian(1, 1000, 1e-3, 12, 0);
  const AugmentedTrajectory traj = integrate_augmented(sys, kDissipativeState, path, Scheme::EulerHeun);
  CHECK(traj.states.front().jacobian == Matrix::Identity(5, 5));
  CHECK(traj.states.front().log_lambda == 0.0);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    CHECK(std::abs(traj.states[k].log_lambda + 0.5 * traj.times[k]) <= 1e-13);
  }
  // state update is unaffected by the tangent data
  const Trajectory plain = integrate(sys, kDissipativeState, path, Scheme::EulerHeun);
  for (std::size_t k = 0; k < plain.states.size(); ++k) CHECK(plain.states[k] == traj.states[k].x);
}

TEST_CASE("augmented integration: strict contactomorphism on T11") {
  const HamiltonianSystem sys = sasaki_einstein_system();
  const ContactState x0{{std::numbers::pi / 2, std::numbers::pi / 2, 0.0, 0.0, 0.0}};
  const BrownianPath path = sample_brownian(5, 100, 1e-4, 4, 0);
  for (Scheme s : {Scheme::EulerHeun, Scheme::StratonovichMidpoint}) {
    for (const auto& st : integrate_augmented(sys, x0, path, s).states) CHECK(st.log_lambda == 0.0);
  }
}

TEST_CASE("deterministic flow: conformal factor quadrature is second order") {
  // H = z^2/2 on Darboux(1): z' = -z^2/2 and R(H) = z, so lambda = (1 + z0 t / 2)^-2.
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(1), "z^2/2", {});
  const ContactState x0{{0.2, 0.3, 1.0}};
  std::vector<double> errors;
  for (Index n : {250, 500, 1000}) {
    const AugmentedTrajectory traj =
        integrate_augmented(sys, x0, sample_brownian(0, n, 1.0 / static_cast<double>(n), 0, 0), Scheme::EulerHeun);
    const double exact = std::pow(1.0 + 0.5, -2.0);
    errors.push_back(std::abs(traj.states.back().lambda() - exact));
  }
  CHECK(errors.back() < 1e-6);
  CHECK(std::log2(errors[0] / errors[1]) > 1.8);
  CHECK(std::log2(errors[1] / errors[2]) > 1.8);
}

TEST_CASE("integration is deterministic") {
  const HamiltonianSystem sys = dissipative_system(1.0, 0.5, 0.1);
  const BrownianPath path = sample_brownian(1, 500, 1e-3, 99, 0);
  for (Scheme s : {Scheme::EulerHeun, Scheme::StratonovichMidpoint}) {
    const AugmentedTrajectory a = integrate_augmented(sys, kDissipativeState, path, s);
    const AugmentedTrajectory b = integrate_augmented(sys, kDissipativeState, path, s);
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      CHECK(a.states[k].x == b.states[k].x);
      CHECK(a.states[k].jacobian == b.states[k].jacobian);
    }
  }
}

TEST_CASE("Heun and midpoint agree to discretization error") {
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(1), "p1^2/2 + sin(q1) + 0.3*z",
                                                                {"0.2*q1", "0.1*p1*z"});
  const BrownianPath path = sample_brownian(2, 1000, 1e-3, 21, 0);
  const ContactState x0{{0.5, 0.5, 0.0}};
  const ContactState h = integrate_final(sys, x0, path, Scheme::EulerHeun);
  const ContactState m = integrate_final(sys, x0, path, Scheme::StratonovichMidpoint);
  CHECK(sup(h - m) < 5e-3);
}

TEST_CASE("tangent flow matches finite differences for both schemes") {
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(1), "p1^2/2 + sin(q1) + 0.3*z",
                                                                {"0.2*q1", "0.1*p1*z"});
  const BrownianPath path = sample_brownian(2, 500, 2e-3, 22, 0);
  const ContactState x0{{0.5, 0.5, 0.0}};
  for (Scheme s : {Scheme::EulerHeun, Scheme::StratonovichMidpoint}) {
    const Matrix j = integrate_augmented(sys, x0, path, s).states.back().jacobian;
    const Matrix fd = finite_difference_jacobian(sys, x0, path, s, 1e-5);
    CHECK((j - fd).norm() / fd.norm() <= 1e-6);
  }
}

TEST_CASE("midpoint divergence is reported") {
  // dz = 5 sin(z) dt with dt = 1: the fixed-point map is bounded but not contractive.
  const HamiltonianSystem sys = HamiltonianSystem::from_sources(Chart::darboux(0), "-5*sin(z)", {});
  CHECK_THROWS_AS(step(sys, ContactState{{1.0}}, Vector(0), 1.0, Scheme::StratonovichMidpoint), MidpointDivergence);
}

TEST_CASE("dimension mismatches are input errors") {
  const HamiltonianSystem sys = dissipative_system(1.0, 0.5, 0.1);
  CHECK_THROWS_AS(integrate(sys, ContactState{{1.0, 2.0}}, sample_brownian(1, 2, 0.1, 0, 0), Scheme::EulerHeun),
                  InputError);
  CHECK_THROWS_AS(integrate(sys, kDissipativeState, sample_brownian(2, 2, 0.1, 0, 0), Scheme::EulerHeun), InputError);
}

TEST_CASE("scheme names") {
  CHECK(scheme_from_string("heun") == Scheme::EulerHeun);
  CHECK(scheme_from_string("midpoint") == Scheme::StratonovichMidpoint);
  CHECK(to_string(Scheme::StratonovichMidpoint) == "midpoint");
  CHECK_THROWS_AS(scheme_from_string("euler"), InputError);
}

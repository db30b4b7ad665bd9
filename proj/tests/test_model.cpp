#include <doctest.h>

#include <cmath>

#include "fcs/model.hpp"
#include "fcs/numerics.hpp"

using namespace fcs;

namespace {

// target probabilities realizing a requested endpoint gamma(1) = g at beta = 1:
// log(p2/p1) = 2 g
DriveProtocol protocol_with_gamma(double g) {
  DriveProtocol p;
  const double r = std::exp(2.0 * g);
  p.target_probs = {1.0 / (1.0 + r), r / (1.0 + r)};
  if (p.target_probs[0] < p.target_probs[1])
    std::swap(p.target_probs[0], p.target_probs[1]);
  return p;
}

}  // namespace

TEST_CASE("laplacian construction") {
  CHECK(build_laplacian(1).cwiseAbs().maxCoeff() == 0.0);
  const Matrix l2 = build_laplacian(2);
  CHECK(l2(0, 1).real() == 1.0);
  CHECK(l2(1, 0).real() == 1.0);
  CHECK(l2(0, 0).real() == 0.0);
  const Matrix l3 = build_laplacian(3);
  CHECK(l3(0, 1).real() == 1.0);
  CHECK(l3(1, 2).real() == 1.0);
  CHECK(l3(0, 2).real() == 0.0);
  CHECK_THROWS_AS(build_laplacian(0), std::invalid_argument);
}

TEST_CASE("laplacian spectrum closed form") {
  CHECK(laplacian_spectrum(1)[0] == doctest::Approx(0.0));
  const auto s2 = laplacian_spectrum(2);
  CHECK(s2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s2[1] == doctest::Approx(-1.0).epsilon(1e-12));
  const auto s3 = laplacian_spectrum(3);
  CHECK(s3[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s3[1] == doctest::Approx(0.0));
  CHECK(s3[2] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));

  for (int L : {4, 17, 64}) {
    const auto closed = laplacian_spectrum(L);
    const auto numeric = hermitian_eig(build_laplacian(L));
    for (int k = 0; k < L; ++k)
      CHECK(numeric.eigenvalues[k] == doctest::Approx(closed[L - 1 - k]).epsilon(1e-12));
  }
}

TEST_CASE("one-particle Hamiltonian entries") {
  DriveProtocol p;  // defaults: lambda sin^2, gamma smoothstep, p = (0.9, 0.1)
  const int L = 4;

  // s = 0: decoupled, flat impurity
  const Matrix h0 = one_particle_hamiltonian(p, 0.0, L);
  CHECK(h0(0, 0).real() == doctest::Approx(0.0));
  CHECK(h0(0, 1).real() == doctest::Approx(0.0));
  CHECK((h0.bottomRightCorner(L, L) - p.kappa * build_laplacian(L)).cwiseAbs().maxCoeff() <=
        1e-12);

  // generic epoch: direct substitution
  const double s = 0.3;
  const Matrix h = one_particle_hamiltonian(p, s, L);
  CHECK(h(0, 0).real() == doctest::Approx(p.epsilon(s) - p.gamma(s)).epsilon(1e-12));
  CHECK(h(0, 1).real() == doctest::Approx(-p.lambda(s)).epsilon(1e-12));
  CHECK(h(1, 1).real() == doctest::Approx(p.epsilon(s) + p.gamma(s)).epsilon(1e-12));
  CHECK(h(1, 2).real() == doctest::Approx(p.kappa).epsilon(1e-12));
  CHECK(is_hermitian(h));

  // L = 1 two-by-two form
  DriveProtocol pc = protocol_with_gamma(-0.25);
  pc.schedule_kind = ScheduleKind::kConstant;
  pc.lambda_max = 0.125;
  const Matrix h1 = one_particle_hamiltonian(pc, 0.5, 1);
  CHECK(h1(0, 0).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(h1(0, 1).real() == doctest::Approx(-0.125).epsilon(1e-12));
  CHECK(h1(1, 1).real() == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("endpoint boundary algebra") {
  DriveProtocol p;
  CHECK(p.gamma_final() == doctest::Approx(0.5 * std::log(1.0 / 9.0)).epsilon(1e-12));
  CHECK(p.gamma(1.0) == doctest::Approx(p.gamma_final()).epsilon(1e-12));
  CHECK(p.lambda(0.0) == doctest::Approx(0.0));
  CHECK(p.lambda(1.0) == doctest::Approx(0.0));
  CHECK(p.gamma(0.0) == doctest::Approx(0.0));

  // spectrum of H_S(1) matches -log(p_k)/beta + F_f
  const double Ff = p.free_energy_final();
  CHECK(p.epsilon(1.0) + p.gamma(1.0) ==
        doctest::Approx(-std::log(0.9) + Ff).epsilon(1e-12));
  CHECK(p.epsilon(1.0) - p.gamma(1.0) ==
        doctest::Approx(-std::log(0.1) + Ff).epsilon(1e-12));
}

TEST_CASE("protocol validation") {
  DriveProtocol p;
  p.kappa = 2.0;
  const auto ok = validate_protocol(p);
  CHECK(ok.passed());
  CHECK_FALSE(ok.has_warnings());

  p.kappa = 1.0;  // |gamma(1)| ~ 1.0986 saturates the coupling window
  const auto warn = validate_protocol(p);
  CHECK(warn.passed());
  CHECK(warn.has_warnings());
  CHECK(warn.summary().find("effective coupling") != std::string::npos);

  DriveProtocol flat;
  flat.lambda_max = 0.0;
  flat.kappa = 2.0;
  const auto noeq = validate_protocol(flat);
  CHECK(noeq.passed());
  CHECK(noeq.summary().find("no equilibration") != std::string::npos);

  DriveProtocol bad;
  bad.target_probs = {0.9, 0.2};
  CHECK_THROWS_WITH_AS(validate_protocol(bad),
                       "protocol: probabilities must sum to 1", std::invalid_argument);
  bad.target_probs = {1.2, -0.2};
  CHECK_THROWS_AS(validate_protocol(bad), std::invalid_argument);

  DriveProtocol frozen;
  frozen.schedule_kind = ScheduleKind::kConstant;
  CHECK_FALSE(validate_protocol(frozen).passed());  // lambda(0) != 0
}

TEST_CASE("free energy difference") {
  DriveProtocol even;
  even.target_probs = {0.5, 0.5};
  CHECK(free_energy_difference(even) == doctest::Approx(0.0).epsilon(1e-12));

  DriveProtocol p;
  CHECK(free_energy_difference(p) ==
        doctest::Approx(std::log(2.0) + 0.5 * std::log(0.09)).epsilon(1e-12));
  CHECK(free_energy_difference(p) == doctest::Approx(-0.51083).epsilon(1e-4));

  DriveProtocol cold = p;
  cold.beta = 2.0;
  CHECK(free_energy_difference(cold) ==
        doctest::Approx(0.5 * free_energy_difference(p)).epsilon(1e-12));
}

TEST_CASE("timescale estimates") {
  DriveProtocol p = protocol_with_gamma(-0.5);
  p.schedule_kind = ScheduleKind::kConstant;
  p.lambda_max = 0.1;
  const auto r = timescale_estimates(p, 0.5, 10);
  CHECK(r.T_S == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.T_m == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(r.T_SR == doctest::Approx(204.8).epsilon(1e-12));

  DriveProtocol flat;
  flat.lambda_max = 0.0;
  const auto inf = timescale_estimates(flat, 0.0, 10);
  CHECK(std::isinf(inf.T_S));  // gamma(0) = 0
  CHECK(std::isinf(inf.T_m));
}

TEST_CASE("decoupled symbol keeps the impurity level at zero") {
  DriveProtocol p;
  const Matrix k = decoupled_symbol(p, 5);
  CHECK(k(0, 0).real() == 0.0);
  CHECK(k.row(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((k.bottomRightCorner(5, 5) - p.kappa * build_laplacian(5)).cwiseAbs().maxCoeff() ==
        0.0);
}

#include <doctest.h>

#include <numbers>

#include "heitler/dynamics.hpp"
#include "heitler/model.hpp"

using namespace heitler;

TEST_CASE("hamiltonian_2ls by direct substitution") {
  CHECK(hamiltonian_2ls({1, 0, 0, 0}).norm() == 0.0);
  const CMatrixd h = hamiltonian_2ls({1, 0, 0.01, 1});
  CMatrixd expect(2, 2);
  expect << 0, 0.01, 0.01, 1;
  CHECK((h - expect).norm() == 0.0);
}

TEST_CASE("joint Hamiltonian without correction") {
  const EmitterParams p{1, 0, 1e-3, 0.3};
  const DetectionParams d{0.2, -0.4, 1e-3, {4}};
  const CMatrixd h = hamiltonian_corrected(p, d, {});
  const CMatrixd a = joint_sensor(d.trunc);
  const CMatrixd s = joint_sigma(d.trunc);
  const CMatrixd expect = kron(hamiltonian_2ls(p), CMatrixd::Identity(4, 4)) +
                          d.delta_a * a.adjoint() * a +
                          d.g * M_SQRT1_2 * (s.adjoint() * a + a.adjoint() * s);
  CHECK((h - expect).norm() < 1e-15);
}

TEST_CASE("Hamiltonians are Hermitian for every phase") {
  const EmitterParams p{1, 0, 1e-3, 0.7};
  const DetectionParams d{0.2, 0.1, 1e-3, {5}};
  for (double phi = 0; phi < 2 * std::numbers::pi; phi += 0.37) {
    const CMatrixd h = hamiltonian_corrected(p, d, {1.7, phi});
    CHECK(is_hermitian(h, 1e-12 * std::max(1.0, h.norm())));
  }
}

TEST_CASE("sensor drive amplitude follows the F parameterization") {
  const EmitterParams p{1, 0, 1e-3, 0};
  const DetectionParams d{1, 0, 1e-3, {3}};
  const CorrectionParams c{2, std::numbers::pi};
  // r|beta| = g Omega F t / gamma = g Omega F / sqrt 2 for the balanced splitter.
  CHECK(c.r * beta_amplitude(p, d, c) == doctest::Approx(1e-6 * 2 / std::sqrt(2.0)));
  // <0|H|1> on the ground-emitter block carries the drive and the phase.
  const CMatrixd h = hamiltonian_corrected(p, d, c);
  const std::complex<double> element = h(1, 0);  // <n=1| H |n=0>
  const std::complex<double> expect =
      -std::complex<double>(0, 1) * (c.r * beta_amplitude(p, d, c)) * std::polar(1.0, c.phi);
  CHECK(std::abs(element - expect) < 1e-18);

  CorrectionParams no_r{1, 0, 1, 0};
  CHECK_THROWS_AS(beta_amplitude(p, d, no_r), ConfigError);
  no_r.F = 0;
  CHECK(beta_amplitude(p, d, no_r) == 0.0);
}

TEST_CASE("jump set composition") {
  const DetectionParams d;
  CHECK(jump_set({1, 0, 1e-3, 0}, d).size() == 2);
  const auto with_dephasing = jump_set({1, 0.2, 1e-3, 0}, d);
  REQUIRE(with_dephasing.size() == 3);
  const CMatrixd& deph = with_dephasing[1].op;
  CHECK((deph - CMatrixd(deph.diagonal().asDiagonal())).norm() == 0.0);
  for (const auto& j : with_dephasing) CHECK(j.rate >= 0);
}

TEST_CASE("uncoupled system factorizes into emitter state and sensor vacuum") {
  const EmitterParams p{1, 0.1, 0.05, 0.3};
  const DetectionParams d{0.5, 0, 0.0, {3}};
  const CMatrixd l = vectorize_superop(hamiltonian_corrected(p, d, {}), jump_set(p, d));
  const CMatrixd rho = unvec(null_space_vector(l), 6);
  const CMatrixd emitter =
      unvec(null_space_vector(vectorize_superop<double>(
                hamiltonian_2ls(p),
                {{p.gamma_sigma, sigma_ops().lower},
                 {p.gamma_phi, sigma_ops().raise * sigma_ops().lower}})),
            2);
  CMatrixd vacuum = CMatrixd::Zero(3, 3);
  vacuum(0, 0) = 1;
  CHECK((rho - kron(emitter, vacuum)).norm() < 1e-12);
}

TEST_CASE("beam-splitter coefficients do not change the physics at fixed F") {
  const EmitterParams p{1, 0, 1e-3, 0.2};
  const DetectionParams d{0.5, 0.1, 1e-3, {3}};
  CorrectionParams balanced{1.3, 2.0};
  CorrectionParams other{1.3, 2.0, 0.8, 0.6};
  // The emitter coupling scales with t, so compare at equal g t.
  DetectionParams d_other = d;
  d_other.g = d.g * balanced.t / other.t;
  const double a = dynamics::g_n_single(p, d, balanced, 2).value;
  const double b = dynamics::g_n_single(p, d_other, other, 2).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  // And at equal g the vanishing-coupling limit still agrees.
  const double c = dynamics::g_n_single(p, d, other, 2).value;
  CHECK(a == doctest::Approx(c).epsilon(1e-5));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(EmitterParams{0, 0, 0, 0}), ConfigError);
  CHECK_THROWS_AS(validate(EmitterParams{1, -0.1, 0, 0}), ConfigError);
  CHECK_THROWS_AS(validate(EmitterParams{1, 0, -1, 0}), ConfigError);
  CHECK_THROWS_AS(validate(EmitterParams{1, 0, NAN, 0}), ConfigError);
  CHECK_THROWS_AS(validate(DetectionParams{0, 0, 1e-3, {3}}), ConfigError);
  CHECK_THROWS_AS(validate(DetectionParams{1, 0, 1e-3, {1}}), ConfigError);
  CHECK_THROWS_AS(validate(CorrectionParams{-1, 0}), ConfigError);
  CHECK_THROWS_AS(validate(CorrectionParams{1, 0, 0.5, 0.5}), ConfigError);
  CHECK_NOTHROW(validate(CorrectionParams{1, 0, 0.6, 0.8}));
  CHECK(EmitterParams{}.low_drive());
  CHECK_FALSE(EmitterParams{1, 0, 0.1, 0}.low_drive());
}

TEST_CASE("parameter records round-trip through JSON") {
  SystemParams s;
  s.emitter = {2, 0.1, 3e-3, -0.25};
  s.detection = {0.4, 0.3, 2e-3, {5}};
  s.correction = {1.25, 3.0, 0.6, 0.8};
  const auto j = params_to_json(s);
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"gamma_sigma", "gamma_phi", "omega_sigma",
                                         "delta_sigma", "Gamma", "delta_a", "g", "n_max", "F",
                                         "phi", "t", "r"});
  const SystemParams back = params_from_json(nlohmann::json::parse(j.dump()));
  CHECK(params_to_json(back) == j);

  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"gamma", 1.0}}), ConfigError);
  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"n_max", 2.5}}), ConfigError);
  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"F", "1"}}), ConfigError);
  CHECK(params_from_json(nlohmann::json{{"F", 2}}).correction.F == 2.0);
}

TEST_CASE("rescaling to emitter units") {
  SystemParams s;
  s.emitter = {2, 0.2, 4e-3, 1};
  s.detection = {0.4, -1, 2e-3, {3}};
  const auto u = in_emitter_units(s);
  CHECK(u.emitter.gamma_sigma == 1.0);
  CHECK(u.emitter.delta_sigma == 0.5);
  CHECK(u.detection.Gamma == doctest::Approx(0.2));
  CHECK(u.detection.g == doctest::Approx(1e-3));
}

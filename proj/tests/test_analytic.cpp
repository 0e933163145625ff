#include <doctest.h>

#include <numbers>
#include <random>

#include "heitler/analytic.hpp"
#include "heitler/dynamics.hpp"

using namespace heitler;
using namespace heitler::analytic;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI{0, 1};

// g2 in units of gamma_sigma = 1 from the complex amplitude of the
// two-photon and one-photon sensor components (independent of the expanded
// real form in the library).
double g2_complex_form(double ds, double Gamma, double da, double F, double phi) {
  const cd x = std::polar(F, phi);
  const cd emitter = 1.0 + 2.0 * kI * ds;
  const cd plus = 1.0 + Gamma + 2.0 * kI * (ds + da);
  const cd num = 4.0 + plus * x * (4.0 + x * emitter);
  const cd den = 2.0 + emitter * x;
  return std::norm(emitter) * std::norm(num) / (std::norm(plus) * std::pow(std::norm(den), 2));
}

struct Point {
  EmitterParams p;
  DetectionParams d;
  CorrectionParams c;
};

std::vector<Point> random_grid(unsigned seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> out;
  for (int k = 0; k < n; ++k) {
    Point pt;
    pt.p.delta_sigma = -2 + 4 * u(rng);
    pt.d.Gamma = 0.1 + 2.9 * u(rng);
    pt.d.delta_a = -2 + 4 * u(rng);
    pt.c.F = 4 * u(rng);
    pt.c.phi = 2 * kPi * u(rng);
    out.push_back(pt);
  }
  return out;
}

}  // namespace

TEST_CASE("derived rates reduce at the symmetric point") {
  const auto r = derived_rates({1, 0, 1e-3, 0}, {1, 0, 1e-3, {3}});
  CHECK(r.gamma_plus == 2.0);
  CHECK(r.Delta_plus == 0.0);
  CHECK(r.Gamma_tilde_sigma_sq == 1.0);
  CHECK(r.Gamma_tilde_plus_sq == 4.0);
  CHECK(r.Gamma_phi == 1.0);
}

TEST_CASE("two-level steady state") {
  CHECK(steady_state_2ls({1, 0, 0.1, 0}).n_sigma == doctest::Approx(1.0 / 27).epsilon(1e-12));
  const auto weak = steady_state_2ls({1, 0, 0, 0.4});
  CHECK(weak.n_sigma == 0.0);
  CHECK(std::abs(weak.alpha) == 0.0);
  CHECK(steady_state_2ls({1, 0, 1e-3, 0}).n_sigma ==
        doctest::Approx(4e-6 / (1 + 8e-6)).epsilon(1e-12));
}

TEST_CASE("two-level steady state matches the joint numeric state") {
  for (const EmitterParams p : {EmitterParams{1, 0, 1e-3, 0}, EmitterParams{1, 0.2, 0.05, 0.7},
                                EmitterParams{1, 0, 0.3, -0.5}}) {
    const DetectionParams d{0.5, 0.2, 1e-3, {3}};
    const auto rho = dynamics::steady_state(p, d, {});
    const CMatrixd e = dynamics::reduce_to_emitter(rho, 3);
    const auto ss = steady_state_2ls(p);
    CHECK(e(1, 1).real() == doctest::Approx(ss.n_sigma).epsilon(1e-4));
    CHECK(std::abs(e(1, 0) - ss.alpha) < 1e-4 * std::abs(ss.alpha));  // <sigma> = rho_eg
  }
}

TEST_CASE("uncorrected resonant values") {
  CHECK(g2_no_dephasing({1, 0, 1e-3, 0}, {1, 0, 1e-3, {3}}, {}) == doctest::Approx(0.25));
  CHECK(g2_no_dephasing({1, 0, 1e-3, 0}, {0.2, 0, 1e-3, {3}}, {}) ==
        doctest::Approx(1 / 1.44).epsilon(1e-12));
  double previous = 2;
  for (double Gamma : {1e-3, 0.01, 0.1, 1.0, 10.0, 1e3}) {
    const double v = g2_no_dephasing({1, 0, 1e-3, 0}, {Gamma, 0, 1e-3, {3}}, {});
    CHECK(v == doctest::Approx(1 / ((1 + Gamma) * (1 + Gamma))).epsilon(1e-12));
    CHECK(v < previous);
    previous = v;
  }
}

TEST_CASE("expanded closed form equals the complex-amplitude form") {
  for (const auto& pt : random_grid(99, 300)) {
    const double lib = g2_no_dephasing(pt.p, pt.d, pt.c);
    const double ref =
        g2_complex_form(pt.p.delta_sigma, pt.d.Gamma, pt.d.delta_a, pt.c.F, pt.c.phi);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("closed form agrees with the master-equation oracle off resonance") {
  const EmitterParams p{1, 0, 1e-3, 0.3};
  const DetectionParams d{0.2, 0, 1e-3, {3}};
  const CorrectionParams c{1, kPi / 2};
  const double closed = g2_no_dephasing(p, d, c);
  const double numeric = dynamics::g_n_zero_delay(p, d, c, 2).value;
  CHECK(closed == doctest::Approx(numeric).epsilon(1e-2));
}

TEST_CASE("closed form is invariant under the conjugation symmetry") {
  for (const auto& pt : random_grid(5, 50)) {
    Point mirror = pt;
    mirror.p.delta_sigma = -pt.p.delta_sigma;
    mirror.d.delta_a = -pt.d.delta_a;
    mirror.c.phi = -pt.c.phi;
    CHECK(g2_no_dephasing(pt.p, pt.d, pt.c) ==
          doctest::Approx(g2_no_dephasing(mirror.p, mirror.d, mirror.c)).epsilon(1e-10));
  }
}

TEST_CASE("closed forms are unit-free") {
  const EmitterParams p{2.5, 0, 2.5e-3, 1.0};
  const DetectionParams d{0.5, -0.75, 2.5e-3, {3}};
  const CorrectionParams c{1.2, 2.1};
  const EmitterParams p1{1, 0, 1e-3, 0.4};
  const DetectionParams d1{0.2, -0.3, 1e-3, {3}};
  CHECK(g2_no_dephasing(p, d, c) == doctest::Approx(g2_no_dephasing(p1, d1, c)).epsilon(1e-12));
  CHECK(g2_dephasing({2, 0.4, 1e-3, 0}, {0.4, 0, 1e-3, {3}}, c) ==
        doctest::Approx(g2_dephasing({1, 0.2, 1e-3, 0}, {0.2, 0, 1e-3, {3}}, c)).epsilon(1e-12));
}

TEST_CASE("resonant antibunching condition") {
  for (double Gamma : {0.05, 0.2, 1.0, 3.0}) {
    const auto b = antibunching_condition({1, 0, 1e-3, 0}, {Gamma, 0, 1e-3, {3}});
    const double root = std::sqrt(Gamma / (Gamma + 1));
    CHECK(b[0].branch == Branch::minus);
    CHECK(b[0].setting.F == doctest::Approx(2 * (1 - root)).epsilon(1e-13));
    CHECK(b[1].setting.F == doctest::Approx(2 * (1 + root)).epsilon(1e-13));
    CHECK(b[0].setting.phi == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(b[1].setting.phi == doctest::Approx(kPi).epsilon(1e-13));
  }
  const auto unit = antibunching_condition({1, 0, 1e-3, 0}, {1, 0, 1e-3, {3}});
  CHECK(unit[0].setting.F == doctest::Approx(2 - std::sqrt(2.0)));
  CHECK(unit[1].setting.F == doctest::Approx(2 + std::sqrt(2.0)));
  const auto narrow = antibunching_condition({1, 0, 1e-3, 0}, {0.2, 0, 1e-3, {3}});
  CHECK(narrow[0].setting.F == doctest::Approx(1.1835).epsilon(1e-4));
  CHECK(narrow[1].setting.F == doctest::Approx(2.8165).epsilon(1e-4));

  CHECK(g2_no_dephasing({1, 0, 1e-3, 0}, {1, 0, 1e-3, {3}},
                        {2 - std::sqrt(2.0), kPi}) < 1e-20);
  CHECK_THROWS_AS(antibunching_condition({1, 0.1, 1e-3, 0}, {}), DomainError);
}

TEST_CASE("detuned antibunching settings zero the numerator") {
  const EmitterParams p{1, 0, 1e-3, 0.5};
  const DetectionParams d{0.2, 0, 1e-3, {3}};
  const double scale = g2_no_dephasing_parts(p, d, {}).numerator;
  for (const auto& b : antibunching_condition(p, d)) {
    const auto parts = g2_no_dephasing_parts(p, d, {b.setting.F, b.setting.phi});
    CHECK(std::abs(parts.numerator) < 1e-10 * scale);
    CHECK(dynamics::g_n_single(p, d, {b.setting.F, b.setting.phi}, 2).value < 1e-3);
  }
}

TEST_CASE("superbunching condition") {
  const auto res = superbunching_condition({1, 0, 1e-3, 0});
  CHECK(res.F == doctest::Approx(2.0));
  CHECK(res.phi == doctest::Approx(kPi));
  const auto det = superbunching_condition({1, 0, 1e-3, 0.5});
  CHECK(det.F == doctest::Approx(std::sqrt(2.0)));
  CHECK(det.phi == doctest::Approx(3 * kPi / 4));
  for (double ds : {-1.5, -0.2, 0.0, 0.5, 2.0}) {
    const auto s = superbunching_condition({1, 0, 1e-3, ds});
    CHECK(std::tan(s.phi) == doctest::Approx(-2 * ds).epsilon(1e-10));
    CHECK(s.F == doctest::Approx(-2 * std::cos(s.phi)).epsilon(1e-12));
    for (double da : {-1.0, 0.0, 0.7}) {
      const auto parts = g2_no_dephasing_parts({1, 0, 1e-3, ds}, {0.3, da, 1e-3, {3}},
                                               {s.F, s.phi});
      const double scale = g2_no_dephasing_parts({1, 0, 1e-3, ds}, {0.3, da, 1e-3, {3}}, {})
                               .denominator;
      CHECK(std::abs(parts.denominator) < 1e-10 * scale);
    }
  }
  CHECK(std::isinf(g2_no_dephasing({1, 0, 1e-3, 0}, {0.2, 0, 1e-3, {3}}, {2, kPi})));
}

TEST_CASE("dephasing closed form") {
  const DetectionParams unit{1, 0, 1e-3, {3}};
  CHECK(g2_dephasing({1, 0, 1e-3, 0}, unit, {}) == doctest::Approx(0.25).epsilon(1e-12));
  const DetectionParams narrow{0.2, 0, 1e-3, {3}};
  CHECK(g2_dephasing({1, 0.1, 1e-3, 0}, narrow, {}) == doctest::Approx(0.73).epsilon(0.01));

  for (double F : {0.0, 0.6, 1.5, 3.0}) {
    for (double phi : {0.0, 1.0, kPi, 5.0}) {
      for (double Gamma : {0.2, 1.0, 4.0}) {
        const DetectionParams d{Gamma, 0, 1e-3, {3}};
        CHECK(g2_dephasing({1, 0, 1e-3, 0}, d, {F, phi}) ==
              doctest::Approx(g2_no_dephasing({1, 0, 1e-3, 0}, d, {F, phi})).epsilon(1e-10));
        // Continuity in gamma_phi.
        CHECK(g2_dephasing({1, 1e-9, 1e-3, 0}, d, {F, phi}) ==
              doctest::Approx(g2_dephasing({1, 0, 1e-3, 0}, d, {F, phi})).epsilon(1e-6));
      }
    }
  }
  CHECK_THROWS_AS(g2_dephasing({1, 0.1, 1e-3, 0.2}, narrow, {}), DomainError);
  CHECK_THROWS_AS(g2_dephasing({1, 0.1, 1e-3, 0}, {0.2, 0.1, 1e-3, {3}}, {}), DomainError);
  CHECK_THROWS_AS(g2_no_dephasing({1, 0.1, 1e-3, 0}, narrow, {}), DomainError);
}

TEST_CASE("dephasing closed form agrees with the master-equation oracle") {
  for (double gphi : {0.1, 0.3}) {
    for (double F : {0.0, 1.1, 2.0}) {
      const EmitterParams p{1, gphi, 1e-3, 0};
      const DetectionParams d{0.2, 0, 1e-3, {3}};
      const CorrectionParams c{F, kPi};
      CHECK(g2_dephasing(p, d, c) ==
            doctest::Approx(dynamics::g_n_single(p, d, c, 2).value).epsilon(1e-3));
    }
  }
}

TEST_CASE("dephasing keeps the minimum strictly positive") {
  const DetectionParams d{0.2, 0, 1e-3, {3}};
  for (double gphi : {0.05, 0.1, 0.2}) {
    double lowest = 1e300;
    for (int k = 0; k <= 6000; ++k) {
      lowest = std::min(lowest, g2_dephasing({1, gphi, 1e-3, 0}, d, {k * 1e-3, kPi}));
    }
    CHECK(lowest > 0);
  }
}

TEST_CASE("far-detuned delay law") {
  const std::vector<double> taus{0, 2 * std::log(2.0) / 0.2, 1e4};
  const auto t = g2_tau_far_detuned(0.2, taus);
  CHECK(t.values[0] == 0.0);
  CHECK(t.values[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(t.values[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(g2_tau_far_detuned(0, taus), ConfigError);
}

TEST_CASE("wavefunction amplitudes") {
  const EmitterParams p{1, 0, 1e-3, 0};
  const DetectionParams d;
  const auto k = wfa_coefficients(p, d, {});
  CHECK(std::abs(k.c01 - cd(0, -2e-3)) < 1e-18);
  CHECK(k.n_sigma() == doctest::Approx(4e-6));
  CHECK(k.g2() == doctest::Approx(g2_no_dephasing(p, d, {})).epsilon(1e-12));

  const auto zero = wfa_coefficients({1, 0, 0, 0.3}, d, {1, 1});
  CHECK(std::abs(zero.c01) + std::abs(zero.c10) + std::abs(zero.c11) + std::abs(zero.c20) == 0);
  CHECK(wfa_ode_residual(zero, {1, 0, 0, 0.3}, d, {1, 1}) == 0.0);
  CHECK_THROWS_AS(wfa_coefficients({1, 0.1, 1e-3, 0}, d, {}), DomainError);
}

TEST_CASE("wavefunction amplitudes solve the stationary amplitude equations") {
  const EmitterParams p{1, 0, 1e-3, 0.4};
  const DetectionParams d{0.3, -0.2, 1e-3, {3}};
  const CorrectionParams c{1.3, 2.2};
  auto k = wfa_coefficients(p, d, c);
  const double base = wfa_ode_residual(k, p, d, c);
  CHECK(base < 1e-8 * p.omega_sigma);
  k.c20 *= 1.01;
  CHECK(wfa_ode_residual(k, p, d, c) > 1e3 * std::max(base, 1e-30));
  CHECK(wfa_ode_residual(k, p, d, c) > 0);
}

TEST_CASE("two-photon suppression roots cancel C20 and match the antibunching settings") {
  for (const auto& pt : random_grid(2024, 200)) {
    const auto roots = two_photon_suppression_condition(pt.p, pt.d);
    const auto ab = antibunching_condition(pt.p, pt.d);
    const double scale = std::abs(wfa_coefficients(pt.p, pt.d, {}).c20);
    for (int j = 0; j < 2; ++j) {
      CHECK(roots[j].branch == ab[j].branch);
      const cd x = std::polar(roots[j].setting.F, roots[j].setting.phi);
      const cd y = std::polar(ab[j].setting.F, ab[j].setting.phi);
      CHECK(std::abs(x - y) <= 1e-10 * std::max(1.0, std::abs(y)));
      const auto k = wfa_coefficients(pt.p, pt.d, {roots[j].setting.F, roots[j].setting.phi});
      CHECK(std::abs(k.c20) < 1e-12 * std::max(scale, 1e-300) * std::max(1.0, std::norm(x)));
    }
  }
}

TEST_CASE("wavefunction g2 equals the closed form on a random grid") {
  for (const auto& pt : random_grid(17, 200)) {
    const double closed = g2_no_dephasing(pt.p, pt.d, pt.c);
    const double amp = wfa_coefficients(pt.p, pt.d, pt.c).g2();
    CHECK(std::abs(amp - closed) <= 1e-8 * closed);
  }
}

TEST_CASE("detuned antibunching reduces to the resonant condition") {
  for (double Gamma = 0.05; Gamma < 5; Gamma *= 1.7) {
    const auto b = antibunching_condition({1, 0, 1e-3, 0}, {Gamma, 0, 1e-3, {3}});
    const double root = std::sqrt(Gamma / (Gamma + 1));
    CHECK(std::abs(b[0].setting.F - 2 * (1 - root)) < 1e-13);
    CHECK(std::abs(b[1].setting.F - 2 * (1 + root)) < 1e-13);
  }
}

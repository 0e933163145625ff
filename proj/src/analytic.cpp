#include "heitler/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace heitler::analytic {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

double wrap_phase(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0) w += two_pi;
  // fmod of values a hair below 2 pi can round up to exactly 2 pi.
  if (w >= two_pi) w = 0.0;
  return w;
}

LaserSetting to_setting(cd x) { return {std::abs(x), wrap_phase(std::arg(x))}; }

SystemParams unitless(const EmitterParams& p, const DetectionParams& d,
                      const CorrectionParams& c) {
  validate(p);
  validate(d);
  return in_emitter_units({p, d, c});
}

void require_no_dephasing(const EmitterParams& p, const char* what) {
  if (p.gamma_phi != 0.0) {
    throw DomainError(std::string(what) + " excludes dephasing (gamma_phi must be 0)");
  }
}

}  // namespace

double RatioParts::value() const {
  const double num = std::max(numerator, 0.0);
  // The numerator cannot vanish on the pole while Gamma > 0.
  if (denominator == 0.0) return std::numeric_limits<double>::infinity();
  return num / denominator;
}

DerivedRates derived_rates(const EmitterParams& p, const DetectionParams& d) {
  const double gp = p.gamma_sigma + d.Gamma;
  const double dp = p.delta_sigma + d.delta_a;
  return {gp, dp, p.gamma_sigma * p.gamma_sigma + 4 * p.delta_sigma * p.delta_sigma,
          gp * gp + 4 * dp * dp, p.gamma_sigma + p.gamma_phi};
}

TwoLevelSteadyState steady_state_2ls(const EmitterParams& p) {
  validate(p);
  const double gs = p.gamma_sigma;
  const double gphi = gs + p.gamma_phi;
  const double om = p.omega_sigma;
  const double ds = p.delta_sigma;
  const double den = gs * (gphi * gphi + 4 * ds * ds) + 8 * gphi * om * om;
  const double n = 4 * gphi * om * om / den;
  const cd alpha = 2.0 * kI * gs * om * (2.0 * kI * ds - gphi) / den;
  return {n, alpha};
}

RatioParts g2_no_dephasing_parts(const EmitterParams& p_in, const DetectionParams& d_in,
                                 const CorrectionParams& c_in) {
  require_no_dephasing(p_in, "g2_no_dephasing");
  const auto s = unitless(p_in, d_in, c_in);
  const auto r = derived_rates(s.emitter, s.detection);
  const double g = s.emitter.gamma_sigma;
  const double ds = s.emitter.delta_sigma;
  const double F = s.correction.F;
  const double phi = s.correction.phi;
  const double gs2 = r.Gamma_tilde_sigma_sq;
  const double gp2 = r.Gamma_tilde_plus_sq;

  const double bracket =
      2 * (4 * g * g * r.Delta_plus + F * F * ds * gp2) * std::sin(phi) +
      2 * g * F * (r.gamma_plus * ds + g * r.Delta_plus) * std::sin(2 * phi) -
      g * (4 * g * r.gamma_plus + F * F * gp2) * std::cos(phi) -
      g * F * (g * r.gamma_plus - 4 * ds * r.Delta_plus) * std::cos(2 * phi);
  const double numerator =
      gs2 * (16 * std::pow(g, 4) + 16 * F * F * g * g * gp2 + std::pow(F, 4) * gs2 * gp2 -
             8 * F * g * bracket);
  const double mod_d2 =
      4 * g * g + F * F * gs2 + 4 * g * F * (g * std::cos(phi) - 2 * ds * std::sin(phi));
  return {numerator, gp2 * mod_d2 * mod_d2};
}

double g2_no_dephasing(const EmitterParams& p, const DetectionParams& d,
                       const CorrectionParams& c) {
  return g2_no_dephasing_parts(p, d, c).value();
}

RatioParts g2_dephasing_parts(const EmitterParams& p_in, const DetectionParams& d_in,
                              const CorrectionParams& c_in) {
  if (p_in.delta_sigma != 0.0 || d_in.delta_a != 0.0) {
    throw DomainError("g2_dephasing holds at resonance only (delta_sigma = delta_a = 0)");
  }
  const auto s = unitless(p_in, d_in, c_in);
  const double g = s.emitter.gamma_sigma;
  const double gphi_rate = s.emitter.gamma_phi;
  const double G = s.detection.Gamma;
  const double F = s.correction.F;
  const double phi = s.correction.phi;
  const double gp = g + G;
  const double Gphi = g + gphi_rate;

  const double a1 = G + Gphi;
  const double a2 = 2 * G + Gphi;
  const double a3 = 3 * G + Gphi;

  const double inner =
      F * g * a2 * std::cos(2 * phi) + (4 * g * (G + gp) + F * F * a1 * a2) * std::cos(phi);
  const double poly = 16 * g * g * g * (G + gp) * (2 * G + gp) +
                      16 * F * F * g * gp * gp * a2 * a3 +
                      std::pow(F, 4) * gp * Gphi * a1 * a2 * a3 + 8 * F * g * gp * a3 * inner;
  // The trailing gamma_plus restores homogeneity (rate^8 / rate^8) and the
  // unfiltered-limit value gamma^2 / (gamma + Gamma)^2 at gamma_phi = 0.
  const double numerator = Gphi * a1 * poly * gp;

  const double square = (4 + F * F) * g * gp + F * F * gphi_rate * (gp + Gphi) +
                        4 * F * g * a1 * std::cos(phi);
  return {numerator, gp * gp * a2 * a3 * square * square};
}

double g2_dephasing(const EmitterParams& p, const DetectionParams& d,
                    const CorrectionParams& c) {
  return g2_dephasing_parts(p, d, c).value();
}

const char* branch_name(Branch b) { return b == Branch::minus ? "minus" : "plus"; }

std::array<BranchSetting, 2> antibunching_condition(const EmitterParams& p_in,
                                                    const DetectionParams& d_in) {
  require_no_dephasing(p_in, "antibunching_condition");
  const auto s = unitless(p_in, d_in, {});
  const double g = s.emitter.gamma_sigma;
  const double ds = s.emitter.delta_sigma;
  const double G = s.detection.Gamma;
  const double da = s.detection.delta_a;
  const cd prefactor = -2.0 * g / (g + 2.0 * kI * ds);
  const cd root = std::sqrt((G + 2.0 * kI * da) / (g + G + 2.0 * kI * (ds + da)));
  return {{{Branch::minus, to_setting(prefactor * (1.0 - root))},
           {Branch::plus, to_setting(prefactor * (1.0 + root))}}};
}

std::array<BranchSetting, 2> two_photon_suppression_condition(const EmitterParams& p_in,
                                                              const DetectionParams& d_in) {
  require_no_dephasing(p_in, "two_photon_suppression_condition");
  const auto s = unitless(p_in, d_in, {});
  const double g = s.emitter.gamma_sigma;
  const double ds = s.emitter.delta_sigma;
  const double G = s.detection.Gamma;
  const double da = s.detection.delta_a;
  const cd plus_rate = g + G + 2.0 * kI * (ds + da);
  // C20 is proportional to qa x^2 + qb x + qc with x = F e^{i phi}.
  const cd qa = plus_rate * (g + 2.0 * kI * ds);
  const cd qb = 4.0 * g * plus_rate;
  const cd qc = 4.0 * g * g;
  const cd disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  // Pick the sign that avoids cancellation, then use Vieta for the other root.
  const cd q = -0.5 * ((std::abs(qb + disc) >= std::abs(qb - disc)) ? qb + disc : qb - disc);
  cd x1 = q / qa;
  cd x2 = qc / q;
  if (std::abs(x1) > std::abs(x2)) std::swap(x1, x2);
  return {{{Branch::minus, to_setting(x1)}, {Branch::plus, to_setting(x2)}}};
}

LaserSetting superbunching_condition(const EmitterParams& p_in) {
  validate(p_in);
  const double ds = p_in.delta_sigma / p_in.gamma_sigma;
  return to_setting(-2.0 / (1.0 + 2.0 * kI * ds));
}

G2Trace g2_tau_far_detuned(double Gamma, std::span<const double> taus) {
  if (!(Gamma > 0)) throw ConfigError("g2_tau_far_detuned needs Gamma > 0");
  G2Trace out;
  out.taus.assign(taus.begin(), taus.end());
  out.values.reserve(taus.size());
  for (double tau : taus) {
    const double v = 1.0 - std::exp(-Gamma * std::abs(tau) / 2.0);
    out.values.push_back(v * v);
  }
  return out;
}

double WfaCoefficients::g2() const {
  const double n = std::norm(c10);
  if (n == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::norm(c20) / (n * n);
}

WfaCoefficients wfa_coefficients(const EmitterParams& p, const DetectionParams& d,
                                 const CorrectionParams& c) {
  require_no_dephasing(p, "wfa_coefficients");
  validate(p);
  validate(d);
  const double g = p.gamma_sigma;
  const double om = p.omega_sigma;
  const double gt = d.g * c.t;
  const cd x = std::polar(c.F, c.phi);
  const cd emitter = g + 2.0 * kI * p.delta_sigma;
  const cd sensor = d.Gamma + 2.0 * kI * d.delta_a;
  const cd plus = g + d.Gamma + 2.0 * kI * (p.delta_sigma + d.delta_a);

  WfaCoefficients out;
  out.c01 = -2.0 * kI * om / emitter;
  out.c10 = -2.0 * gt * om * (2.0 * g + emitter * x) / (g * sensor * emitter);
  out.c11 = 4.0 * kI * gt * om * om * (2.0 * g + plus * x) / (g * sensor * emitter * plus);
  out.c20 = 2.0 * std::sqrt(2.0) * gt * gt * om * om *
            (4.0 * g * g + plus * x * (4.0 * g + x * emitter)) /
            (g * g * sensor * sensor * emitter * plus);
  return out;
}

double wfa_ode_residual(const WfaCoefficients& k, const EmitterParams& p,
                        const DetectionParams& d, const CorrectionParams& c) {
  require_no_dephasing(p, "wfa_ode_residual");
  const double om = p.omega_sigma;
  const double gt = d.g * c.t;
  const cd rb = c.r * beta_amplitude(p, d, c) * std::polar(1.0, c.phi);  // r|beta| e^{i phi}
  const cd emitter = p.delta_sigma - 0.5 * kI * p.gamma_sigma;
  const cd sensor = d.delta_a - 0.5 * kI * d.Gamma;
  const cd pair = p.delta_sigma + d.delta_a - 0.5 * kI * (p.gamma_sigma + d.Gamma);
  const double sq2 = std::sqrt(2.0);

  // Stationary amplitude equations, dropping terms beyond leading order in
  // (g, Omega_sigma) for each amplitude.
  const cd r01 = om + emitter * k.c01;
  const cd r10 = -kI * rb + gt * k.c01 + sensor * k.c10;
  const cd r11 = om * k.c10 - kI * rb * k.c01 + pair * k.c11;
  const cd r20 = sq2 * gt * k.c11 - sq2 * kI * rb * k.c10 + 2.0 * sensor * k.c20;
  return std::max({std::abs(r01), std::abs(r10), std::abs(r11), std::abs(r20)});
}

}  // namespace heitler::analytic

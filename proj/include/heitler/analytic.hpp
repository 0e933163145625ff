#pragma once

// Closed-form evaluators for the weakly driven, laser-corrected emitter: the
// exact two-level steady state, leading-order filtered g2 with detuning (no
// dephasing) and with dephasing (at resonance), the antibunching and
// superbunching conditions, and the pure-state amplitude approximation that
// underlies them.

#include <array>
#include <complex>
#include <span>

#include "heitler/model.hpp"
#include "heitler/trace.hpp"

namespace heitler::analytic {

struct DerivedRates {
  double gamma_plus;            ///< gamma_sigma + Gamma
  double Delta_plus;            ///< delta_sigma + delta_a
  double Gamma_tilde_sigma_sq;  ///< gamma_sigma^2 + 4 delta_sigma^2
  double Gamma_tilde_plus_sq;   ///< gamma_plus^2 + 4 Delta_plus^2
  double Gamma_phi;             ///< gamma_sigma + gamma_phi
};

DerivedRates derived_rates(const EmitterParams& p, const DetectionParams& d);

struct TwoLevelSteadyState {
  double n_sigma;             ///< <s^+ s>
  std::complex<double> alpha; ///< <s>
};

/// Exact steady state of the driven, decaying, dephased two-level system
/// (all orders in the drive).
TwoLevelSteadyState steady_state_2ls(const EmitterParams& p);

/// Numerator and denominator of the leading-order g2 ratio, kept apart so the
/// zero (antibunching) and pole (superbunching) structure can be inspected.
struct RatioParts {
  double numerator;
  double denominator;
  double value() const;
};

/// Leading-order filtered g2(0) with detunings and no dephasing, written as
///   G_s^2 |N|^2 / (G_+^2 |D|^4),
///   N = 4 g^2 + (g_+ + 2i D_+) x [4 g + x (g + 2i d_s)],  D = 2 g + (g + 2i d_s) x,
/// with x = F e^{i phi}, expanded into real trigonometric form. Throws
/// DomainError when gamma_phi != 0. Returns +inf exactly on the pole.
double g2_no_dephasing(const EmitterParams& p, const DetectionParams& d,
                       const CorrectionParams& c);
RatioParts g2_no_dephasing_parts(const EmitterParams& p, const DetectionParams& d,
                                 const CorrectionParams& c);

/// Leading-order filtered g2(0) with pure dephasing, emitter and sensor both
/// resonant with the laser. Throws DomainError for nonzero detunings.
double g2_dephasing(const EmitterParams& p, const DetectionParams& d,
                    const CorrectionParams& c);
RatioParts g2_dephasing_parts(const EmitterParams& p, const DetectionParams& d,
                              const CorrectionParams& c);

enum class Branch { minus, plus };

const char* branch_name(Branch b);

struct LaserSetting {
  double F;
  double phi;  ///< wrapped to [0, 2 pi)
};

struct BranchSetting {
  Branch branch;
  LaserSetting setting;
};

/// The two (F, phi) pairs that cancel g2(0) to leading order,
///   F e^{i phi} = -2 g / (g + 2i d_s) (1 -+ sqrt((Gamma + 2i d_a)/(g_+ + 2i D_+))),
/// with the minus branch (conventional antibunching) first. Requires
/// gamma_phi = 0.
std::array<BranchSetting, 2> antibunching_condition(const EmitterParams& p,
                                                    const DetectionParams& d);

/// Roots of the two-photon amplitude C20 viewed as a quadratic in F e^{i phi},
/// labelled like antibunching_condition (the minus branch is the root of
/// smaller modulus). Independent route to the same pairs.
std::array<BranchSetting, 2> two_photon_suppression_condition(const EmitterParams& p,
                                                              const DetectionParams& d);

/// Pole of g2(0): F e^{i phi} = -2 g / (g + 2i d_s), i.e. tan phi = -2 d_s / g
/// and F = -2 cos phi (F in units where gamma_sigma = 1). Independent of the
/// sensor detuning.
LaserSetting superbunching_condition(const EmitterParams& p);

/// (1 - exp(-Gamma tau / 2))^2.
G2Trace g2_tau_far_detuned(double Gamma, std::span<const double> taus);

/// Pure-state amplitudes |psi> = |0,0> + C01|0,1> + C10|1,0> + C11|1,1> + C20|2,0>
/// with |n, m> = n sensor photons, m emitter excitations, to leading order in
/// g and Omega_sigma.
struct WfaCoefficients {
  std::complex<double> c01;
  std::complex<double> c10;
  std::complex<double> c11;
  std::complex<double> c20;

  double n_a() const { return std::norm(c10); }
  double n_sigma() const { return std::norm(c01); }
  /// 2 |C20|^2 / |C10|^4; +inf when C10 vanishes.
  double g2() const;
};

/// Requires gamma_phi = 0: dephasing cannot be carried by a pure state.
WfaCoefficients wfa_coefficients(const EmitterParams& p, const DetectionParams& d,
                                 const CorrectionParams& c);

/// Largest absolute residual of the stationary amplitude equations (leading
/// order in g and Omega_sigma) evaluated at the given amplitudes.
double wfa_ode_residual(const WfaCoefficients& coeffs, const EmitterParams& p,
                        const DetectionParams& d, const CorrectionParams& c);

}  // namespace heitler::analytic

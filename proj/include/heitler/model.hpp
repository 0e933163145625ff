#pragma once

// Physical parameters and operator builders for a coherently driven two-level
// emitter observed through a weakly coupled sensor mode, with an optional
// correction laser injected into the sensor. Everything lives in the frame
// rotating at the driving-laser frequency; only detunings are stored.

#include <cmath>
#include <vector>

#include <json.hpp>

#include "heitler/algebra.hpp"

namespace heitler {

/// Two-level emitter: decay, pure dephasing, drive amplitude and detuning
/// from the driving laser (omega_emitter - omega_laser).
struct EmitterParams {
  double gamma_sigma = 1.0;
  double gamma_phi = 0.0;
  double omega_sigma = 1e-3;
  double delta_sigma = 0.0;

  /// Heitler regime: drive well below the decay rate.
  bool low_drive() const { return omega_sigma <= 1e-2 * gamma_sigma; }
};

/// Sensor (frequency filter) of linewidth Gamma and detuning delta_a from the
/// laser. The coupling g only has to be small enough for the vanishing-coupling
/// limit; correlations are ratios in which it cancels.
struct DetectionParams {
  double Gamma = 1.0;
  double delta_a = 0.0;
  double g = 1e-3;
  FockTruncation trunc{3};
};

/// Correction laser: fraction F of the coherent field the sensor receives from
/// the emitter, its phase phi, and the lossless beam-splitter coefficients.
struct CorrectionParams {
  double F = 0.0;
  double phi = 0.0;
  double t = M_SQRT1_2;
  double r = M_SQRT1_2;
};

struct SystemParams {
  EmitterParams emitter;
  DetectionParams detection;
  CorrectionParams correction;
};

void validate(const EmitterParams& p);
void validate(const DetectionParams& d);
void validate(const CorrectionParams& c);
void validate(const SystemParams& s);

/// |beta| = g (Omega / gamma_sigma) (t / r) F. Throws ConfigError for r = 0
/// with F > 0.
double beta_amplitude(const EmitterParams& p, const DetectionParams& d,
                      const CorrectionParams& c);

/// Delta_sigma s^+s + Omega_sigma (s^+ + s) on the bare 2x2 emitter space.
CMatrixd hamiltonian_2ls(const EmitterParams& p);

/// Joint emitter (x) sensor Hamiltonian, basis index = m * n_max + n with m the
/// emitter level and n the sensor photon number:
///   H_2ls (x) 1 + Delta_a a^+a - i r|beta| (e^{i phi} a^+ - e^{-i phi} a)
///   + g t (s^+ a + a^+ s).
CMatrixd hamiltonian_corrected(const EmitterParams& p, const DetectionParams& d,
                               const CorrectionParams& c);

/// (gamma_sigma, s), (gamma_phi, s^+s) when gamma_phi > 0, (Gamma, a), all on
/// the joint space.
std::vector<Jump<double>> jump_set(const EmitterParams& p, const DetectionParams& d);

/// Joint-space ladder operators.
CMatrixd joint_sigma(const FockTruncation& trunc);
CMatrixd joint_sensor(const FockTruncation& trunc);

/// The same parameters with every rate divided by gamma_sigma (gamma_sigma
/// becomes 1). Dimensionless quantities are unaffected.
SystemParams in_emitter_units(const SystemParams& s);

/// Flat key-value object with the keys gamma_sigma, gamma_phi, omega_sigma,
/// delta_sigma, Gamma, delta_a, g, n_max, F, phi, t, r (in that order).
nlohmann::ordered_json params_to_json(const SystemParams& s);

/// Missing keys keep their defaults; unknown keys raise ConfigError.
SystemParams params_from_json(const nlohmann::json& j, SystemParams base = {});

}  // namespace heitler

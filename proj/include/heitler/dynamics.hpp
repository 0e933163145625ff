#pragma once

// Numeric oracle: exact steady state of the joint emitter (x) sensor master
// equation, equal-time sensor correlators in the vanishing-coupling limit and
// the delay-resolved g2(tau) from the quantum regression theorem.

#include <span>
#include <vector>

#include "heitler/model.hpp"
#include "heitler/trace.hpp"

namespace heitler::dynamics {

using DensityMatrix = CMatrixd;

/// Relative change under g -> g/2 below which a correlation counts as
/// converged to the vanishing-coupling limit.
inline constexpr double kConvergenceTolerance = 5e-3;

/// Basis weights w(m, n) = mu^m lambda^n for emitter level m and sensor photon
/// number n, with mu ~ sqrt(n_sigma) and lambda ~ |<a>| estimated to leading
/// order. Any positive weights give the same steady state; these make every
/// scaled unknown of order one.
BasisScaling<double> excitation_scaling(const EmitterParams& p, const DetectionParams& d,
                                        const CorrectionParams& c);

/// Joint steady state, validated as a density matrix (Hermitian, unit trace,
/// eigenvalues >= -1e-10).
DensityMatrix steady_state(const EmitterParams& p, const DetectionParams& d,
                           const CorrectionParams& c);

/// Partial traces of a joint state (emitter is the outer factor).
CMatrixd reduce_to_emitter(const DensityMatrix& rho, int n_max);
CMatrixd reduce_to_sensor(const DensityMatrix& rho, int n_max);

/// <a^+^n a^n> of a joint state.
double sensor_moment(const DensityMatrix& rho, int n_max, int order);

struct CorrelationResult {
  int order = 2;
  double value = 0;         ///< g^(n)(0) at g_used
  double n_a = 0;           ///< sensor population <a^+ a> at g_used
  bool converged = false;   ///< |value(g/2) - value(g)| < 0.5% of value(g)
  double g_used = 0;
  int trunc_used = 0;
  double value_half_g = 0;  ///< the same correlator recomputed at g/2
  double relative_change = 0;
};

/// Single evaluation without the g-halving check.
struct Correlation {
  double value;
  double n_a;
};
Correlation g_n_single(const EmitterParams& p, const DetectionParams& d,
                       const CorrectionParams& c, int order);

/// g^(n)(0) = <a^+^n a^n> / <a^+ a>^n with the g-halving convergence check.
/// Requires n_max >= order + 1 (ConfigError otherwise). Non-converged values
/// are returned with converged = false, never replaced.
CorrelationResult g_n_zero_delay(const EmitterParams& p, const DetectionParams& d,
                                 const CorrectionParams& c, int order);

/// g2(tau) from B(tau) = exp(L tau)[a rho_ss a^+], read as <a^+ a B(tau)> / n_a^2.
/// taus must be non-negative and sorted.
G2Trace g2_tau(const EmitterParams& p, const DetectionParams& d, const CorrectionParams& c,
               std::span<const double> taus);

struct ConvergenceRow {
  double g;
  int n_max;
  double value;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double max_relative_difference = 0;
  bool flagged = false;  ///< some pair differs by more than 0.5%
};

/// g2(0) at g in {2 g0, g0, g0 / 2} and n_max in {N, N + 1}.
ConvergenceReport convergence_report(const EmitterParams& p, const DetectionParams& d,
                                     const CorrectionParams& c);

}  // namespace heitler::dynamics

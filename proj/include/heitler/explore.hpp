#pragma once

// Parameter-space exploration over the correction laser (F, phi): g2 maps,
// derivative-free extremum search, and plateau measurement on g2(tau) traces.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heitler/analytic.hpp"
#include "heitler/model.hpp"
#include "heitler/trace.hpp"

namespace heitler::explore {

enum class Engine { analytic, numeric };

Engine parse_engine(const std::string& name);
const char* engine_name(Engine e);

/// Values above this (and poles) are stored capped and flagged.
inline constexpr double kDivergenceCap = 1e6;

struct SweepGrid {
  std::vector<double> f_values;
  std::vector<double> phi_values;
  SystemParams fixed;
};

/// F in [0, f_max] (endpoints included), phi in [0, 2 pi) with step 2 pi / n_phi.
SweepGrid default_grid(const SystemParams& fixed, int n_f = 121, int n_phi = 121,
                       double f_max = 6.0);

/// Axes must be non-empty and strictly increasing.
void validate(const SweepGrid& grid);

enum class CellFlag { ok, diverged, unconverged };
const char* flag_name(CellFlag f);

struct G2Map {
  std::vector<double> f_values;
  std::vector<double> phi_values;
  int order = 2;
  Eigen::MatrixXd values;       ///< (F index, phi index)
  std::vector<CellFlag> flags;  ///< row-major, F outer

  CellFlag flag(Eigen::Index i_f, Eigen::Index i_phi) const {
    return flags[static_cast<std::size_t>(i_f * values.cols() + i_phi)];
  }
};

/// Closed-form g2(0) for a parameter point: the dephasing formula at
/// resonance, the detuned formula without dephasing, DomainError otherwise.
double analytic_g2(const SystemParams& s);

/// Dense map of g^(order)(0). The analytic engine only supports order 2 and
/// the closed-form validity domains; the numeric engine runs the g-halving
/// check per cell and flags unconverged cells.
G2Map g2_map(const SweepGrid& grid, Engine engine, int order = 2);

enum class OptimumKind { min, max };
OptimumKind parse_kind(const std::string& name);
const char* kind_name(OptimumKind k);

struct Optimum {
  OptimumKind kind = OptimumKind::min;
  double value = 0;
  double at_F = 0;
  double at_phi = 0;
  int evaluations = 0;
  bool unbounded = false;  ///< max search that runs into the superbunching pole
};

struct OptimizeOptions {
  std::optional<double> phi_fixed;
  /// Skip the coarse scan and refine from this point.
  std::optional<analytic::LaserSetting> seed;
  int coarse_f = 61;
  int coarse_phi = 72;
  double f_max = 6.0;
  double tolerance = 1e-8;
  int candidates = 4;
};

/// Extremum of g2(0) over (F, phi): coarse grid scan, then alternating
/// golden-section refinement on F and phi from the best local extrema until a
/// sweep changes the value by less than the tolerance. Equal extrema (within
/// 1e-10) resolve to the smaller F. The objective is the dephasing formula at
/// resonance, the detuned formula without dephasing, and the numeric oracle
/// otherwise.
Optimum optimize_g2(const EmitterParams& p, const DetectionParams& d, OptimumKind kind,
                    const OptimizeOptions& options = {});

struct ScalarMinimum {
  double x;
  double value;
};

/// Golden-section search for a minimum of f on [lo, hi].
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double x_tol, int* evaluations = nullptr);

/// Largest tau* with g2(tau) < threshold for every sampled tau <= tau*,
/// interpolating linearly to the first crossing; 0 when g2(0) >= threshold.
double plateau_extent(const G2Trace& trace, double threshold = 0.1);

}  // namespace heitler::explore

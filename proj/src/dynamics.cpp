#include "heitler/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "heitler/analytic.hpp"

namespace heitler::dynamics {

namespace {

using cd = std::complex<double>;

// Normalized correlators are resolved to about 1e-10 absolute; negative values
// above -kRoundingFloor are rounding noise around an exact zero.
constexpr double kRoundingFloor = 1e-9;

// Steady state kept in the scaled basis, normalized so that
// scaling.restore(rho) has unit trace.
struct ScaledSteadyState {
  BasisScaling<double> scaling;
  CMatrixd liouvillian;
  CMatrixd rho;
};

ScaledSteadyState solve_scaled(const EmitterParams& p, const DetectionParams& d,
                               const CorrectionParams& c) {
  validate(p);
  validate(d);
  validate(c);
  const CMatrixd h = hamiltonian_corrected(p, d, c);
  const CMatrixd l = vectorize_superop(h, jump_set(p, d));
  auto scaling = excitation_scaling(p, d, c);
  CMatrixd lt = scaling.conjugate_superop(l);
  const CVectord kernel = null_space_vector(lt);
  CMatrixd rho = unvec(kernel, h.rows());
  const cd tr = scaling.restore(rho).trace();
  rho /= tr;
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return {std::move(scaling), std::move(lt), std::move(rho)};
}

// n!/(n-k)!
double falling(int n, int k) {
  double out = 1;
  for (int j = 0; j < k; ++j) out *= double(n - j);
  return out;
}

// <a^+^k a^k> of the unscaled state, from the diagonal of a scaled one.
double scaled_moment(const CMatrixd& scaled, const RVector<double>& w, int n_max, int k) {
  double sum = 0;
  for (int m = 0; m < 2; ++m) {
    for (int n = k; n < n_max; ++n) {
      const int i = m * n_max + n;
      sum += falling(n, k) * w(i) * w(i) * scaled(i, i).real();
    }
  }
  return sum;
}

}  // namespace

BasisScaling<double> excitation_scaling(const EmitterParams& p, const DetectionParams& d,
                                        const CorrectionParams& c) {
  const int n_max = d.trunc.n_max;
  double mu = 1.0;
  double lambda = 1.0;
  if (p.omega_sigma > 0) {
    mu = std::min(1.0, std::sqrt(analytic::steady_state_2ls(p).n_sigma));
    const double g = p.gamma_sigma;
    const double tilde_sigma = std::hypot(g, 2 * p.delta_sigma);
    const double tilde_sensor = std::hypot(d.Gamma, 2 * d.delta_a);
    const double amplitude = 2 * d.g * c.t * p.omega_sigma * (2 * g + tilde_sigma * c.F) /
                             (g * tilde_sensor * tilde_sigma);
    if (amplitude > 0) lambda = std::min(1.0, amplitude);
  }
  RVector<double> w(2 * n_max);
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < n_max; ++n) w(m * n_max + n) = std::pow(mu, m) * std::pow(lambda, n);
  }
  return BasisScaling<double>(w);
}

DensityMatrix steady_state(const EmitterParams& p, const DetectionParams& d,
                           const CorrectionParams& c) {
  const auto solution = solve_scaled(p, d, c);
  DensityMatrix rho = solution.scaling.restore(solution.rho);
  check_density_matrix(rho, 1e-10);
  return rho;
}

CMatrixd reduce_to_emitter(const DensityMatrix& rho, int n_max) {
  CMatrixd out = CMatrixd::Zero(2, 2);
  for (int m = 0; m < 2; ++m) {
    for (int mp = 0; mp < 2; ++mp) {
      for (int n = 0; n < n_max; ++n) out(m, mp) += rho(m * n_max + n, mp * n_max + n);
    }
  }
  return out;
}

CMatrixd reduce_to_sensor(const DensityMatrix& rho, int n_max) {
  CMatrixd out = CMatrixd::Zero(n_max, n_max);
  for (int n = 0; n < n_max; ++n) {
    for (int np = 0; np < n_max; ++np) {
      for (int m = 0; m < 2; ++m) out(n, np) += rho(m * n_max + n, m * n_max + np);
    }
  }
  return out;
}

double sensor_moment(const DensityMatrix& rho, int n_max, int order) {
  return scaled_moment(rho, RVector<double>::Ones(rho.rows()), n_max, order);
}

Correlation g_n_single(const EmitterParams& p, const DetectionParams& d,
                       const CorrectionParams& c, int order) {
  if (order < 1) throw ConfigError("correlation order must be >= 1");
  if (d.trunc.n_max < order + 1) {
    throw ConfigError("g^(" + std::to_string(order) + ") needs n_max >= " +
                      std::to_string(order + 1) + ", got " +
                      std::to_string(d.trunc.n_max));
  }
  const auto s = solve_scaled(p, d, c);
  const auto& w = s.scaling.weights();
  const int n_max = d.trunc.n_max;
  const double n_a = scaled_moment(s.rho, w, n_max, 1);
  if (!(n_a > 0)) {
    throw NumericalError("sensor population vanishes; g^(n) is undefined without drive");
  }
  const double moment = scaled_moment(s.rho, w, n_max, order);
  double value = moment / std::pow(n_a, order);
  if (value < 0 && value > -kRoundingFloor) value = 0;
  if (!std::isfinite(value) || value < 0) {
    throw NumericalError("g^(" + std::to_string(order) + ") evaluated to " +
                         std::to_string(value));
  }
  return {value, n_a};
}

CorrelationResult g_n_zero_delay(const EmitterParams& p, const DetectionParams& d,
                                 const CorrectionParams& c, int order) {
  const auto full = g_n_single(p, d, c, order);
  DetectionParams half = d;
  half.g = d.g / 2;
  const auto halved = g_n_single(p, half, c, order);

  CorrelationResult out;
  out.order = order;
  out.value = full.value;
  out.n_a = full.n_a;
  out.g_used = d.g;
  out.trunc_used = d.trunc.n_max;
  out.value_half_g = halved.value;
  const double scale = std::max(std::abs(full.value), 1e-300);
  out.relative_change = std::abs(halved.value - full.value) / scale;
  out.converged = out.relative_change < kConvergenceTolerance;
  return out;
}

G2Trace g2_tau(const EmitterParams& p, const DetectionParams& d, const CorrectionParams& c,
               std::span<const double> taus) {
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!(taus[k] >= 0) || (k > 0 && taus[k] < taus[k - 1])) {
      throw ConfigError("g2_tau: delays must be non-negative and sorted");
    }
  }
  const auto s = solve_scaled(p, d, c);
  const auto& w = s.scaling.weights();
  const int n_max = d.trunc.n_max;
  const Eigen::Index dim = s.rho.rows();
  const double n_a = scaled_moment(s.rho, w, n_max, 1);
  if (!(n_a > 0)) throw NumericalError("g2_tau: sensor population vanishes");

  const CMatrixd a = s.scaling.conjugate_operator(joint_sensor(d.trunc));
  CVectord state = vec(a * s.rho * a.adjoint());

  // The propagator is exact for any step, so one exponential per distinct gap.
  std::map<double, CMatrixd> propagators;
  G2Trace out;
  out.taus.assign(taus.begin(), taus.end());
  out.values.reserve(taus.size());
  double previous = 0;
  for (double tau : taus) {
    const double gap = tau - previous;
    if (gap > 0) {
      // Uniform grids built by accumulation differ in the last bits.
      auto it = propagators.lower_bound(gap * (1 - 1e-12));
      if (it == propagators.end() || it->first > gap * (1 + 1e-12)) {
        it = propagators.emplace(gap, propagator(s.liouvillian, gap)).first;
      }
      state = it->second * state;
      previous = tau;
    }
    const CMatrixd b = unvec(state, dim);
    double value = scaled_moment(b, w, n_max, 1) / (n_a * n_a);
    if (value < 0 && value > -kRoundingFloor) value = 0;
    if (!std::isfinite(value) || value < 0) {
      throw NumericalError("g2_tau: propagation produced an invalid value at tau = " +
                           std::to_string(tau));
    }
    out.values.push_back(value);
  }
  return out;
}

ConvergenceReport convergence_report(const EmitterParams& p, const DetectionParams& d,
                                     const CorrectionParams& c) {
  ConvergenceReport report;
  for (double factor : {2.0, 1.0, 0.5}) {
    for (int extra : {0, 1}) {
      DetectionParams trial = d;
      trial.g = d.g * factor;
      trial.trunc.n_max = d.trunc.n_max + extra;
      report.rows.push_back({trial.g, trial.trunc.n_max, g_n_single(p, trial, c, 2).value});
    }
  }
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < report.rows.size(); ++j) {
      const double a = report.rows[i].value;
      const double b = report.rows[j].value;
      const double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
      report.max_relative_difference = std::max(report.max_relative_difference, rel);
    }
  }
  report.flagged = report.max_relative_difference > kConvergenceTolerance;
  return report;
}

}  // namespace heitler::dynamics

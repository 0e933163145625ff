#include "heitler/explore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heitler/dynamics.hpp"

namespace heitler::explore {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool at_resonance(const SystemParams& s) {
  return s.emitter.delta_sigma == 0.0 && s.detection.delta_a == 0.0;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] > v[k - 1])) return false;
  }
  return true;
}

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// Objective for the extremum search: the cheapest evaluator valid at the point.
std::function<double(const SystemParams&)> objective_for(const SystemParams& s) {
  if (at_resonance(s) || s.emitter.gamma_phi == 0.0) {
    return [](const SystemParams& q) { return analytic_g2(q); };
  }
  return [](const SystemParams& q) {
    return dynamics::g_n_single(q.emitter, q.detection, q.correction, 2).value;
  };
}

struct Point {
  double F;
  double phi;
  double value;  // signed objective: g2 for min, -g2 for max
};

}  // namespace

Engine parse_engine(const std::string& name) {
  if (name == "analytic") return Engine::analytic;
  if (name == "numeric") return Engine::numeric;
  throw ConfigError("unknown engine '" + name + "' (expected analytic or numeric)");
}

const char* engine_name(Engine e) { return e == Engine::analytic ? "analytic" : "numeric"; }

SweepGrid default_grid(const SystemParams& fixed, int n_f, int n_phi, double f_max) {
  if (n_f < 1 || n_phi < 1) throw ConfigError("grid needs at least one point per axis");
  SweepGrid grid;
  grid.fixed = fixed;
  for (int i = 0; i < n_f; ++i) {
    grid.f_values.push_back(n_f == 1 ? 0.0 : f_max * i / (n_f - 1));
  }
  for (int j = 0; j < n_phi; ++j) grid.phi_values.push_back(kTwoPi * j / n_phi);
  return grid;
}

void validate(const SweepGrid& grid) {
  if (grid.f_values.empty() || grid.phi_values.empty()) {
    throw ConfigError("sweep grid axes must be non-empty");
  }
  if (!strictly_increasing(grid.f_values) || !strictly_increasing(grid.phi_values)) {
    throw ConfigError("sweep grid axes must be strictly increasing");
  }
  if (grid.f_values.front() < 0) throw ConfigError("F values must be >= 0");
}

const char* flag_name(CellFlag f) {
  switch (f) {
    case CellFlag::ok: return "ok";
    case CellFlag::diverged: return "diverged";
    case CellFlag::unconverged: return "unconverged";
  }
  return "ok";
}

double analytic_g2(const SystemParams& s) {
  if (at_resonance(s)) return analytic::g2_dephasing(s.emitter, s.detection, s.correction);
  if (s.emitter.gamma_phi == 0.0) {
    return analytic::g2_no_dephasing(s.emitter, s.detection, s.correction);
  }
  throw DomainError(
      "no closed form with both dephasing and detuning; use the numeric engine");
}

G2Map g2_map(const SweepGrid& grid, Engine engine, int order) {
  validate(grid);
  validate(grid.fixed);
  if (engine == Engine::analytic && order != 2) {
    throw DomainError("analytic engine provides g2 only; use the numeric engine for order " +
                      std::to_string(order));
  }
  if (engine == Engine::analytic) analytic_g2(grid.fixed);  // domain check up front

  G2Map map;
  map.f_values = grid.f_values;
  map.phi_values = grid.phi_values;
  map.order = order;
  const auto n_f = static_cast<Eigen::Index>(grid.f_values.size());
  const auto n_phi = static_cast<Eigen::Index>(grid.phi_values.size());
  map.values.resize(n_f, n_phi);
  map.flags.assign(static_cast<std::size_t>(n_f * n_phi), CellFlag::ok);

  SystemParams point = grid.fixed;
  for (Eigen::Index i = 0; i < n_f; ++i) {
    for (Eigen::Index j = 0; j < n_phi; ++j) {
      point.correction.F = grid.f_values[static_cast<std::size_t>(i)];
      point.correction.phi = grid.phi_values[static_cast<std::size_t>(j)];
      double value = 0;
      CellFlag flag = CellFlag::ok;
      if (engine == Engine::analytic) {
        value = analytic_g2(point);
      } else {
        const auto r = dynamics::g_n_zero_delay(point.emitter, point.detection,
                                                point.correction, order);
        value = r.value;
        if (!r.converged) flag = CellFlag::unconverged;
      }
      if (!(value <= kDivergenceCap)) {
        value = kDivergenceCap;
        flag = CellFlag::diverged;
      }
      map.values(i, j) = value;
      map.flags[static_cast<std::size_t>(i * n_phi + j)] = flag;
    }
  }
  return map;
}

OptimumKind parse_kind(const std::string& name) {
  if (name == "min") return OptimumKind::min;
  if (name == "max") return OptimumKind::max;
  throw ConfigError("unknown optimum kind '" + name + "' (expected min or max)");
}

const char* kind_name(OptimumKind k) { return k == OptimumKind::min ? "min" : "max"; }

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double x_tol, int* evaluations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int count = 2;
  while (b - a > x_tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++count;
  }
  if (evaluations) *evaluations += count;
  return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

Optimum optimize_g2(const EmitterParams& p, const DetectionParams& d, OptimumKind kind,
                    const OptimizeOptions& options) {
  SystemParams base{p, d, CorrectionParams{}};
  validate(base);
  if (options.coarse_f < 2 || options.coarse_phi < 1 || options.f_max <= 0) {
    throw ConfigError("optimize_g2: coarse grid needs >= 2 F points and a positive range");
  }

  Optimum out;
  out.kind = kind;

  // Without dephasing the superbunching pole (F <= 2 always) makes the
  // maximum unbounded unless phi is pinned away from it.
  if (kind == OptimumKind::max && p.gamma_phi == 0.0) {
    const auto pole = analytic::superbunching_condition(p);
    const bool phi_free = !options.phi_fixed;
    const bool phi_on_pole =
        options.phi_fixed && std::abs(wrap_phase(*options.phi_fixed) - pole.phi) < 1e-12;
    if (pole.F <= options.f_max && (phi_free || phi_on_pole)) {
      out.unbounded = true;
      out.value = std::numeric_limits<double>::infinity();
      out.at_F = pole.F;
      out.at_phi = pole.phi;
      return out;
    }
  }

  const auto g2 = objective_for(base);
  const double sign = kind == OptimumKind::min ? 1.0 : -1.0;
  int evaluations = 0;
  auto objective = [&](double F, double phi) {
    SystemParams q = base;
    q.correction.F = F;
    q.correction.phi = phi;
    ++evaluations;
    const double v = g2(q);
    return std::isfinite(v) ? sign * v : sign * std::numeric_limits<double>::infinity();
  };

  const double h_f = options.f_max / (options.coarse_f - 1);
  const double h_phi = kTwoPi / options.coarse_phi;

  std::vector<Point> starts;
  if (options.seed) {
    starts.push_back({options.seed->F, options.phi_fixed ? *options.phi_fixed : options.seed->phi,
                      0.0});
    starts.back().value = objective(starts.back().F, starts.back().phi);
  } else {
    const int n_phi = options.phi_fixed ? 1 : options.coarse_phi;
    Eigen::MatrixXd scan(options.coarse_f, n_phi);
    auto phi_at = [&](int j) { return options.phi_fixed ? *options.phi_fixed : h_phi * j; };
    for (int i = 0; i < options.coarse_f; ++i) {
      for (int j = 0; j < n_phi; ++j) scan(i, j) = objective(h_f * i, phi_at(j));
    }
    // Local minima of the signed objective; phi is periodic when free.
    for (int i = 0; i < options.coarse_f; ++i) {
      for (int j = 0; j < n_phi; ++j) {
        const double v = scan(i, j);
        if (!std::isfinite(v)) continue;
        bool is_min = true;
        for (int di = -1; di <= 1 && is_min; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            if (di == 0 && dj == 0) continue;
            const int ii = i + di;
            if (ii < 0 || ii >= options.coarse_f) continue;
            if (n_phi == 1 && dj != 0) continue;
            const int jj = (j + dj + n_phi) % n_phi;
            if (scan(ii, jj) < v) {
              is_min = false;
              break;
            }
          }
        }
        if (is_min) starts.push_back({h_f * i, phi_at(j), v});
      }
    }
    std::stable_sort(starts.begin(), starts.end(),
                     [](const Point& a, const Point& b) { return a.value < b.value; });
    if (starts.size() > static_cast<std::size_t>(options.candidates)) {
      starts.resize(static_cast<std::size_t>(options.candidates));
    }
    if (starts.empty()) {
      throw NumericalError("optimize_g2: objective is not finite anywhere on the grid");
    }
  }

  const double x_tol = 1e-11;
  std::vector<Point> refined;
  for (Point current : starts) {
    int quiet_sweeps = 0;
    for (int sweep = 0; sweep < 500 && quiet_sweeps < 2; ++sweep) {
      const double before = current.value;
      const double f_lo = std::max(0.0, current.F - h_f);
      const double f_hi = std::min(options.f_max, current.F + h_f);
      const double phi_now = current.phi;
      const auto along_f = golden_section_minimize(
          [&](double F) { return objective(F, phi_now); }, f_lo, f_hi, x_tol, &evaluations);
      if (along_f.value < current.value) {
        current.F = along_f.x;
        current.value = along_f.value;
      }
      if (!options.phi_fixed) {
        const double f_now = current.F;
        const auto along_phi = golden_section_minimize(
            [&](double phi) { return objective(f_now, phi); }, current.phi - h_phi,
            current.phi + h_phi, x_tol, &evaluations);
        if (along_phi.value < current.value) {
          current.phi = along_phi.x;
          current.value = along_phi.value;
        }
      }
      quiet_sweeps = std::abs(before - current.value) < options.tolerance ? quiet_sweeps + 1 : 0;
    }
    current.phi = wrap_phase(current.phi);
    refined.push_back(current);
  }

  Point best = refined.front();
  for (const Point& r : refined) {
    if (r.value < best.value - 1e-10 ||
        (std::abs(r.value - best.value) <= 1e-10 && r.F < best.F)) {
      best = r;
    }
  }

  out.value = sign * best.value;
  out.at_F = best.F;
  out.at_phi = best.phi;
  out.evaluations = evaluations;
  if (kind == OptimumKind::max && !(out.value <= kDivergenceCap)) {
    out.unbounded = true;
    out.value = std::numeric_limits<double>::infinity();
  }
  return out;
}

double plateau_extent(const G2Trace& trace, double threshold) {
  if (!(threshold > 0 && threshold < 1)) {
    throw ConfigError("plateau threshold must lie in (0, 1)");
  }
  if (trace.taus.empty() || trace.taus.size() != trace.values.size()) {
    throw ConfigError("plateau_extent: trace is empty or malformed");
  }
  if (trace.values.front() >= threshold) return 0.0;
  for (std::size_t k = 1; k < trace.values.size(); ++k) {
    if (trace.values[k] >= threshold) {
      const double t0 = trace.taus[k - 1];
      const double t1 = trace.taus[k];
      const double v0 = trace.values[k - 1];
      const double v1 = trace.values[k];
      return t0 + (threshold - v0) * (t1 - t0) / (v1 - v0);
    }
  }
  return trace.taus.back();
}

}  // namespace heitler::explore

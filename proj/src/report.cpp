#include "heitler/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "heitler/analytic.hpp"
#include "heitler/dynamics.hpp"
#include "heitler/errors.hpp"

namespace heitler::report {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

struct Cell {
  enum Kind { number, text, boolean } kind;
  std::string value;
};

Cell num(double x) { return {Cell::number, format_number(x)}; }
Cell integer(long x) { return {Cell::number, std::to_string(x)}; }
Cell text(std::string s) { return {Cell::text, std::move(s)}; }
Cell boolean(bool b) { return {Cell::boolean, b ? "true" : "false"}; }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string render(const Table& table, Format format) {
  std::ostringstream os;
  if (format == Format::csv) {
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
      os << (k ? "," : "") << table.columns[k];
    }
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k].value;
      os << '\n';
    }
    return os.str();
  }
  ojson rows = ojson::array();
  for (const auto& row : table.rows) {
    ojson obj = ojson::object();
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Cell& c = row[k];
      if (c.value.empty()) obj[table.columns[k]] = nullptr;
      else if (c.kind == Cell::number) obj[table.columns[k]] = ojson::parse(c.value);
      else if (c.kind == Cell::boolean) obj[table.columns[k]] = c.value == "true";
      else obj[table.columns[k]] = c.value;
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

double relative_deviation(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

std::vector<double> delay_grid(const RunConfig& c) {
  const auto& p = c.params;
  const double slow = std::min(p.detection.Gamma, p.emitter.gamma_sigma);
  const double tau_max = c.tau_max.value_or(20.0 / slow);
  const double step =
      c.tau_step.value_or(std::min(0.01 / p.emitter.gamma_sigma, 0.01 / p.detection.Gamma));
  if (!(tau_max >= 0) || !(step > 0)) throw ConfigError("tau range needs tau_max >= 0, step > 0");
  const auto n = static_cast<long>(std::floor(tau_max / step + 1e-9));
  if (n > 10'000'000) throw ConfigError("tau grid too large");
  std::vector<double> taus;
  taus.reserve(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) taus.push_back(static_cast<double>(k) * step);
  return taus;
}

Outcome steady(const RunConfig& c) {
  const auto& s = c.params;
  Table t{{"engine", "n_sigma", "alpha_re", "alpha_im", "n_a"}, {}};
  if (c.engine == explore::Engine::analytic) {
    const auto ss = analytic::steady_state_2ls(s.emitter);
    Cell n_a = text("");
    if (s.emitter.gamma_phi == 0.0) {
      n_a = num(analytic::wfa_coefficients(s.emitter, s.detection, s.correction).n_a());
    }
    t.rows.push_back({text("analytic"), num(ss.n_sigma), num(ss.alpha.real()),
                      num(ss.alpha.imag()), n_a});
  } else {
    const auto rho = dynamics::steady_state(s.emitter, s.detection, s.correction);
    const int n_max = s.detection.trunc.n_max;
    const CMatrixd e = dynamics::reduce_to_emitter(rho, n_max);
    t.rows.push_back({text("numeric"), num(e(1, 1).real()), num(e(1, 0).real()),
                      num(e(1, 0).imag()), num(dynamics::sensor_moment(rho, n_max, 1))});
  }
  return {render(t, c.format), 0, {}};
}

Outcome correlation(const RunConfig& c, int order) {
  const auto& s = c.params;
  Table t{{"engine", "order", "value", "n_a", "converged"}, {}};
  Outcome out;
  if (c.engine == explore::Engine::analytic) {
    if (order != 2) throw DomainError("analytic engine provides g2 only");
    const double v = explore::analytic_g2(s);
    Cell n_a = text("");
    if (s.emitter.gamma_phi == 0.0) {
      n_a = num(analytic::wfa_coefficients(s.emitter, s.detection, s.correction).n_a());
    }
    if (!std::isfinite(v)) throw NumericalError("g2 diverges at this point (superbunching pole)");
    t.rows.push_back({text("analytic"), integer(order), num(v), n_a, boolean(true)});
  } else {
    const auto r = dynamics::g_n_zero_delay(s.emitter, s.detection, s.correction, order);
    t.rows.push_back(
        {text("numeric"), integer(order), num(r.value), num(r.n_a), boolean(r.converged)});
    if (!r.converged) {
      out.status = 3;
      out.diagnostic = "not converged: halving g changed g" + std::to_string(order) +
                       " by " + format_number(100 * r.relative_change) + "%";
    }
  }
  out.body = render(t, c.format);
  return out;
}

Outcome delay_trace(const RunConfig& c) {
  const auto& s = c.params;
  const auto taus = delay_grid(c);
  const G2Trace trace = c.engine == explore::Engine::analytic
                            ? analytic::g2_tau_far_detuned(s.detection.Gamma, taus)
                            : dynamics::g2_tau(s.emitter, s.detection, s.correction, taus);
  Table t{{"tau", "g2"}, {}};
  for (std::size_t k = 0; k < trace.taus.size(); ++k) {
    t.rows.push_back({num(trace.taus[k]), num(trace.values[k])});
  }
  return {render(t, c.format), 0, {}};
}

Outcome map(const RunConfig& c) {
  auto grid = explore::default_grid(c.params, c.n_f, c.phi_fixed ? 1 : c.n_phi, c.f_max);
  if (c.phi_fixed) grid.phi_values = {*c.phi_fixed};
  const auto m = explore::g2_map(grid, c.engine, c.order);
  Table t{{"F", "phi", "g" + std::to_string(c.order), "flag"}, {}};
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      t.rows.push_back({num(m.f_values[static_cast<std::size_t>(i)]),
                        num(m.phi_values[static_cast<std::size_t>(j)]), num(m.values(i, j)),
                        text(explore::flag_name(m.flag(i, j)))});
    }
  }
  return {render(t, c.format), 0, {}};
}

Outcome conditions(const RunConfig& c) {
  const auto& s = c.params;
  Table t{{"branch", "F", "phi"}, {}};
  for (const auto& b : analytic::antibunching_condition(s.emitter, s.detection)) {
    t.rows.push_back({text(analytic::branch_name(b.branch)), num(b.setting.F),
                      num(b.setting.phi)});
  }
  const auto sb = analytic::superbunching_condition(s.emitter);
  t.rows.push_back({text("superbunching"), num(sb.F), num(sb.phi)});
  return {render(t, c.format), 0, {}};
}

Outcome optimize(const RunConfig& c) {
  explore::OptimizeOptions options;
  options.phi_fixed = c.phi_fixed;
  options.f_max = c.f_max;
  const auto o = explore::optimize_g2(c.params.emitter, c.params.detection, c.kind, options);
  Table t{{"kind", "value", "F", "phi", "evaluations"}, {}};
  t.rows.push_back({text(explore::kind_name(o.kind)),
                    o.unbounded ? text("unbounded") : num(o.value), num(o.at_F), num(o.at_phi),
                    integer(o.evaluations)});
  return {render(t, c.format), 0, {}};
}

struct Check {
  std::string name;
  int points = 0;
  double max_dev = 0;
  double tolerance = 0;
};

Outcome validate_suite(const RunConfig& c) {
  const SystemParams base = c.params;
  std::vector<Check> checks;

  // Closed forms against the master-equation oracle; points with g2 < 1e-2
  // are skipped since relative deviations there measure the drive order.
  {
    Check k{"detuned_vs_numeric", 0, 0, 1e-2};
    for (double Gamma : {0.2, 1.0}) {
      for (double ds : {0.0, 0.3}) {
        for (double da : {0.0, -0.4}) {
          for (double F : {0.0, 0.5, 1.0, 3.0}) {
            for (double phi : {0.0, kPi / 2, kPi, 4.0}) {
              SystemParams s = base;
              s.emitter.gamma_phi = 0;
              s.emitter.delta_sigma = ds * s.emitter.gamma_sigma;
              s.detection.Gamma = Gamma * s.emitter.gamma_sigma;
              s.detection.delta_a = da * s.emitter.gamma_sigma;
              s.correction.F = F;
              s.correction.phi = phi;
              const double a = analytic::g2_no_dephasing(s.emitter, s.detection, s.correction);
              if (!(a >= 1e-2 && a <= 1e3)) continue;
              const double n =
                  dynamics::g_n_single(s.emitter, s.detection, s.correction, 2).value;
              k.max_dev = std::max(k.max_dev, relative_deviation(n, a));
              ++k.points;
            }
          }
        }
      }
    }
    checks.push_back(k);
  }
  {
    Check k{"dephasing_vs_numeric", 0, 0, 1e-2};
    for (double gphi : {0.05, 0.2}) {
      for (double Gamma : {0.2, 1.0}) {
        for (double F : {0.0, 1.0, 2.5}) {
          for (double phi : {0.0, kPi / 2, kPi}) {
            SystemParams s = base;
            s.emitter.gamma_phi = gphi * s.emitter.gamma_sigma;
            s.emitter.delta_sigma = 0;
            s.detection.delta_a = 0;
            s.detection.Gamma = Gamma * s.emitter.gamma_sigma;
            s.correction.F = F;
            s.correction.phi = phi;
            const double a = analytic::g2_dephasing(s.emitter, s.detection, s.correction);
            const double n = dynamics::g_n_single(s.emitter, s.detection, s.correction, 2).value;
            k.max_dev = std::max(k.max_dev, relative_deviation(n, a));
            ++k.points;
          }
        }
      }
    }
    checks.push_back(k);
  }
  // Mutual checks of the closed forms on a seeded random grid.
  {
    Check wfa{"wavefunction_vs_detuned", 0, 0, 1e-8};
    Check roots{"suppression_vs_antibunching", 0, 0, 1e-10};
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      SystemParams s = base;
      s.emitter.gamma_sigma = 1.0;
      s.emitter.gamma_phi = 0.0;
      s.emitter.delta_sigma = -2 + 4 * unit(rng);
      s.detection.Gamma = 0.1 + 2.9 * unit(rng);
      s.detection.delta_a = -2 + 4 * unit(rng);
      s.correction.F = 4 * unit(rng);
      s.correction.phi = 2 * kPi * unit(rng);
      const double closed = analytic::g2_no_dephasing(s.emitter, s.detection, s.correction);
      const double amp =
          analytic::wfa_coefficients(s.emitter, s.detection, s.correction).g2();
      wfa.max_dev = std::max(wfa.max_dev, relative_deviation(amp, closed));
      ++wfa.points;

      const auto a = analytic::antibunching_condition(s.emitter, s.detection);
      const auto b = analytic::two_photon_suppression_condition(s.emitter, s.detection);
      for (int j = 0; j < 2; ++j) {
        const auto xa = std::polar(a[j].setting.F, a[j].setting.phi);
        const auto xb = std::polar(b[j].setting.F, b[j].setting.phi);
        roots.max_dev = std::max(roots.max_dev, std::abs(xa - xb) / std::max(1.0, std::abs(xa)));
      }
      ++roots.points;
    }
    checks.push_back(wfa);
    checks.push_back(roots);
  }

  Table t{{"check", "points", "max_rel_dev", "tolerance", "passed"}, {}};
  Outcome out;
  for (const auto& k : checks) {
    const bool ok = k.max_dev <= k.tolerance;
    t.rows.push_back({text(k.name), integer(k.points), num(k.max_dev), num(k.tolerance),
                      boolean(ok)});
    if (!ok) {
      out.status = 3;
      out.diagnostic = "validation check '" + k.name + "' exceeded its tolerance";
    }
  }
  out.body = render(t, c.format);
  return out;
}

Outcome convergence(const RunConfig& c) {
  const auto& s = c.params;
  const auto r = dynamics::convergence_report(s.emitter, s.detection, s.correction);
  // Reference row: the requested (g, n_max).
  double reference = r.rows.front().value;
  for (const auto& row : r.rows) {
    if (row.g == s.detection.g && row.n_max == s.detection.trunc.n_max) reference = row.value;
  }
  Table t{{"g", "n_max", "g2", "rel_diff", "flagged"}, {}};
  for (const auto& row : r.rows) {
    t.rows.push_back({num(row.g), integer(row.n_max), num(row.value),
                      num(relative_deviation(row.value, reference)), boolean(r.flagged)});
  }
  return {render(t, c.format), 0, {}};
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::none_of(keys.begin(), keys.end(),
                     [&](const char* k) { return item.key() == k; })) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

}  // namespace

Command parse_command(const std::string& name) {
  static const std::pair<const char*, Command> table[] = {
      {"steady", Command::steady},         {"g2", Command::g2},
      {"gn", Command::gn},                 {"g2tau", Command::g2tau},
      {"map", Command::map},               {"conditions", Command::conditions},
      {"optimize", Command::optimize},     {"validate", Command::validate},
      {"convergence", Command::convergence}};
  for (const auto& [n, c] : table) {
    if (name == n) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

const char* command_name(Command c) {
  switch (c) {
    case Command::steady: return "steady";
    case Command::g2: return "g2";
    case Command::gn: return "gn";
    case Command::g2tau: return "g2tau";
    case Command::map: return "map";
    case Command::conditions: return "conditions";
    case Command::optimize: return "optimize";
    case Command::validate: return "validate";
    case Command::convergence: return "convergence";
  }
  return "g2";
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

const char* format_name(Format f) { return f == Format::csv ? "csv" : "json"; }

std::string format_number(double x) {
  if (!std::isfinite(x)) throw NumericalError("non-finite value cannot be written");
  if (x == 0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  ojson j;
  j["command"] = command_name(c.command);
  j["params"] = params_to_json(c.params);
  ojson o;
  o["engine"] = explore::engine_name(c.engine);
  o["order"] = c.order;
  o["tau_max"] = c.tau_max ? ojson(*c.tau_max) : ojson(nullptr);
  o["tau_step"] = c.tau_step ? ojson(*c.tau_step) : ojson(nullptr);
  o["kind"] = explore::kind_name(c.kind);
  o["phi_fixed"] = c.phi_fixed ? ojson(*c.phi_fixed) : ojson(nullptr);
  o["n_f"] = c.n_f;
  o["n_phi"] = c.n_phi;
  o["f_max"] = c.f_max;
  j["options"] = std::move(o);
  j["output"] = {{"path", c.out}, {"format", format_name(c.format)}};
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"command", "params", "options", "output"}, "run config");
  RunConfig c;
  if (j.contains("command")) c.command = parse_command(j.at("command").get<std::string>());
  if (j.contains("params")) c.params = params_from_json(j.at("params"));
  if (j.contains("options")) {
    const json& o = j.at("options");
    reject_unknown(o,
                   {"engine", "order", "tau_max", "tau_step", "kind", "phi_fixed", "n_f",
                    "n_phi", "f_max"},
                   "options");
    if (o.contains("engine")) c.engine = explore::parse_engine(o.at("engine").get<std::string>());
    if (o.contains("order")) c.order = o.at("order").get<int>();
    c.tau_max = optional_number(o, "tau_max");
    c.tau_step = optional_number(o, "tau_step");
    if (o.contains("kind")) c.kind = explore::parse_kind(o.at("kind").get<std::string>());
    c.phi_fixed = optional_number(o, "phi_fixed");
    if (o.contains("n_f")) c.n_f = o.at("n_f").get<int>();
    if (o.contains("n_phi")) c.n_phi = o.at("n_phi").get<int>();
    if (o.contains("f_max")) c.f_max = o.at("f_max").get<double>();
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) c.out = o.at("path").get<std::string>();
    if (o.contains("format")) c.format = parse_format(o.at("format").get<std::string>());
  }
  return c;
}

Outcome execute(const RunConfig& c) {
  validate(c.params);
  switch (c.command) {
    case Command::steady: return steady(c);
    case Command::g2: return correlation(c, 2);
    case Command::gn: return correlation(c, c.order);
    case Command::g2tau: return delay_trace(c);
    case Command::map: return map(c);
    case Command::conditions: return conditions(c);
    case Command::optimize: return optimize(c);
    case Command::validate: return validate_suite(c);
    case Command::convergence: return convergence(c);
  }
  throw ConfigError("unhandled command");
}

int exit_status(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return 4;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
      dynamic_cast<const nlohmann::json::exception*>(&e)) {
    return 2;
  }
  return 3;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Outcome result = execute(config);
    if (config.out.empty()) {
      out << result.body;
    } else {
      std::ofstream file(config.out, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file " + config.out);
      file << result.body;
      if (!file) throw ConfigError("failed writing output file " + config.out);
    }
    if (!result.diagnostic.empty()) err << "heitler: " << result.diagnostic << '\n';
    return result.status;
  } catch (const std::exception& e) {
    err << "heitler: " << e.what() << '\n';
    return exit_status(e);
  }
}

Figure parse_figure(const std::string& name) {
  if (name == "fig1") return Figure::fig1;
  if (name == "fig2") return Figure::fig2;
  if (name == "fig3") return Figure::fig3;
  throw ConfigError("unknown figure '" + name + "' (expected fig1, fig2 or fig3)");
}

const char* figure_name(Figure f) {
  switch (f) {
    case Figure::fig1: return "fig1";
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
  }
  return "fig1";
}

std::vector<ManifestEntry> figure_entries(Figure kind, const FigureOptions& options) {
  std::vector<ManifestEntry> entries;
  auto add = [&](std::string file, std::string panel, std::string description, RunConfig c) {
    c.out = file;
    entries.push_back({std::move(file), std::move(panel), std::move(description), std::move(c)});
  };
  RunConfig base;
  base.n_f = options.n_f;
  base.n_phi = options.n_phi;

  if (kind == Figure::fig1) {
    // Resonance, no dephasing; the first panel stands in for unfiltered
    // detection with a sensor a thousand times broader than the emitter.
    const std::pair<const char*, double> maps[] = {{"a", 1e3}, {"b", 1.0}, {"c", 0.2}};
    for (const auto& [panel, Gamma] : maps) {
      RunConfig c = base;
      c.command = Command::map;
      c.engine = explore::Engine::analytic;
      c.params.detection.Gamma = Gamma;
      add(std::string("fig1") + panel + ".csv", panel,
          "g2 over (F, phi) at resonance, Gamma = " + format_number(Gamma), c);
    }
    const std::pair<const char*, int> cuts[] = {{"d", 2}, {"e", 3}, {"f", 4}};
    for (const auto& [panel, order] : cuts) {
      RunConfig c = base;
      c.command = Command::map;
      c.engine = explore::Engine::numeric;
      c.order = order;
      c.phi_fixed = kPi;
      c.params.detection.Gamma = 0.2;
      c.params.detection.trunc.n_max = 5;
      add(std::string("fig1") + panel + ".csv", panel,
          "g" + std::to_string(order) + " along phi = pi, Gamma = 0.2, numeric", c);
    }
  } else if (kind == Figure::fig2) {
    struct Panel {
      const char* name;
      double delta_a;
      double gamma_phi;
      explore::Engine engine;
    };
    const Panel panels[] = {{"a", 0.5, 0.0, explore::Engine::analytic},
                            {"b", 0.0, 0.0, explore::Engine::analytic},
                            {"c", 0.5, 0.2, explore::Engine::numeric},
                            {"d", 0.0, 0.2, explore::Engine::numeric}};
    for (const auto& p : panels) {
      RunConfig c = base;
      c.command = Command::map;
      c.engine = p.engine;
      c.params.emitter.delta_sigma = 0.5;
      c.params.emitter.gamma_phi = p.gamma_phi;
      c.params.detection.Gamma = 0.2;
      c.params.detection.delta_a = p.delta_a;
      add(std::string("fig2") + p.name + ".csv", p.name,
          "g2 over (F, phi), delta_sigma = 0.5, delta_a = " + format_number(p.delta_a) +
              ", gamma_phi = " + format_number(p.gamma_phi),
          c);
    }
    // Extremes over the correction laser at gamma_phi = 0.2, detector on
    // the laser, for a few emitter detunings; F = 0 gives the uncorrected line.
    for (double ds : {0.0, 0.25, 0.5, 1.0}) {
      const std::string tag = "_ds" + format_number(ds);
      RunConfig c = base;
      c.params.emitter.gamma_phi = 0.2;
      c.params.emitter.delta_sigma = ds;
      c.params.detection.Gamma = 0.2;
      c.command = Command::optimize;
      c.kind = explore::OptimumKind::max;
      add("fig2e" + tag + ".csv", "e", "max g2, delta_sigma = " + format_number(ds), c);
      c.kind = explore::OptimumKind::min;
      add("fig2f" + tag + ".csv", "f", "min g2, delta_sigma = " + format_number(ds), c);
      c.command = Command::g2;
      c.engine = explore::Engine::numeric;
      add("fig2f" + tag + "_uncorrected.csv", "f",
          "uncorrected g2, delta_sigma = " + format_number(ds), c);
    }
  } else {
    RunConfig trace = base;
    trace.command = Command::g2tau;
    trace.engine = explore::Engine::numeric;
    trace.tau_max = options.tau_max;
    trace.tau_step = options.tau_step;
    trace.params.detection.Gamma = 0.2;

    RunConfig reference = trace;
    const auto ab = analytic::antibunching_condition(reference.params.emitter,
                                                     reference.params.detection)[0];
    reference.params.correction.F = ab.setting.F;
    reference.params.correction.phi = ab.setting.phi;

    struct Panel {
      const char* name;
      double delta_sigma;
      double delta_a;
      double gamma_phi;
    };
    const Panel panels[] = {{"a", 0.5, 0.5, 0.0}, {"b", 0.5, 0.0, 0.0}, {"c", 0.0, 0.0, 0.1}};
    for (const auto& p : panels) {
      const std::string stem = std::string("fig3") + p.name;
      add(stem + "_reference.csv", p.name, "g2(tau) at resonance with the minus-branch correction",
          reference);
      RunConfig c = trace;
      c.params.emitter.delta_sigma = p.delta_sigma;
      c.params.emitter.gamma_phi = p.gamma_phi;
      c.params.detection.delta_a = p.delta_a;
      add(stem + "_uncorrected.csv", p.name, "g2(tau) without correction", c);
      if (p.gamma_phi == 0.0) {
        const auto cond = analytic::antibunching_condition(c.params.emitter, c.params.detection)[0];
        c.params.correction.F = cond.setting.F;
        c.params.correction.phi = cond.setting.phi;
      } else {
        const auto best = explore::optimize_g2(c.params.emitter, c.params.detection,
                                               explore::OptimumKind::min);
        c.params.correction.F = best.at_F;
        c.params.correction.phi = best.at_phi;
      }
      add(stem + "_corrected.csv", p.name,
          p.gamma_phi == 0.0 ? "g2(tau) with the minus-branch correction"
                             : "g2(tau) with the g2-minimizing correction",
          c);
    }
  }
  return entries;
}

nlohmann::ordered_json manifest_to_json(Figure kind, const std::vector<ManifestEntry>& entries) {
  ojson j;
  j["figure"] = figure_name(kind);
  ojson list = ojson::array();
  for (const auto& e : entries) {
    ojson item;
    item["file"] = e.file;
    item["panel"] = e.panel;
    item["description"] = e.description;
    item["config"] = to_json(e.config);
    list.push_back(std::move(item));
  }
  j["entries"] = std::move(list);
  return j;
}

std::vector<ManifestEntry> manifest_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"figure", "entries"}, "manifest");
  std::vector<ManifestEntry> entries;
  for (const auto& item : j.at("entries")) {
    reject_unknown(item, {"file", "panel", "description", "config"}, "manifest entry");
    entries.push_back({item.at("file").get<std::string>(), item.value("panel", ""),
                       item.value("description", ""), run_config_from_json(item.at("config"))});
  }
  return entries;
}

std::vector<ManifestEntry> emit_figure_data(Figure kind, const std::filesystem::path& out_dir,
                                            const FigureOptions& options) {
  std::filesystem::create_directories(out_dir);
  const auto entries = figure_entries(kind, options);
  for (const auto& e : entries) {
    RunConfig c = e.config;
    c.out = (out_dir / e.file).string();
    Outcome result = execute(c);
    std::ofstream file(c.out, std::ios::binary);
    file << result.body;
    if (!file) throw ConfigError("failed writing " + c.out);
  }
  std::ofstream manifest(out_dir / (std::string(figure_name(kind)) + "_manifest.json"),
                         std::ios::binary);
  manifest << manifest_to_json(kind, entries).dump(2) << '\n';
  if (!manifest) throw ConfigError("failed writing manifest");
  return entries;
}

int replay_manifest(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
                    std::ostream& err) {
  std::ifstream in(manifest);
  if (!in) {
    err << "heitler: cannot open manifest " << manifest.string() << '\n';
    return 2;
  }
  std::vector<ManifestEntry> entries;
  try {
    entries = manifest_from_json(json::parse(in));
  } catch (const std::exception& e) {
    err << "heitler: " << e.what() << '\n';
    return exit_status(e);
  }
  std::filesystem::create_directories(out_dir);
  int worst = 0;
  std::ostringstream sink;
  for (auto& e : entries) {
    e.config.out = (out_dir / e.file).string();
    worst = std::max(worst, run(e.config, sink, err));
  }
  return worst;
}

}  // namespace heitler::report

#include "heitler/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "heitler/errors.hpp"
#include "heitler/report.hpp"

namespace heitler::cli {

namespace {

struct Flags {
  SystemParams params;
  std::optional<int> n_max;
  std::string engine = "numeric";
  std::string format = "csv";
  std::string out;
  int order = 2;
  std::optional<double> tau_max;
  std::optional<double> tau_step;
  std::string kind = "min";
  std::optional<double> phi_fixed;
  int n_f = 121;
  int n_phi = 121;
  double f_max = 6.0;
};

void add_common(CLI::App* sub, Flags& f) {
  auto& e = f.params.emitter;
  auto& d = f.params.detection;
  auto& c = f.params.correction;
  sub->add_option("--gamma-sigma", e.gamma_sigma, "emitter decay rate (the unit, default 1)");
  sub->add_option("--gamma-phi", e.gamma_phi, "pure dephasing rate");
  sub->add_option("--omega", e.omega_sigma, "drive amplitude");
  sub->add_option("--delta-sigma", e.delta_sigma, "emitter - laser detuning");
  sub->add_option("--Gamma", d.Gamma, "sensor linewidth");
  sub->add_option("--delta-a", d.delta_a, "sensor - laser detuning");
  sub->add_option("--g", d.g, "sensor coupling");
  sub->add_option("--nmax", f.n_max, "sensor Fock levels (default 3, or order + 1)");
  sub->add_option("--F", c.F, "correction laser fraction");
  sub->add_option("--phi", c.phi, "correction laser phase");
  sub->add_option("--t", c.t, "beam-splitter transmission");
  sub->add_option("--r", c.r, "beam-splitter reflection");
  sub->add_option("--engine", f.engine, "analytic or numeric")
      ->check(CLI::IsMember({"analytic", "numeric"}));
  sub->add_option("--out", f.out, "output file (default: standard output)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

report::RunConfig to_config(const std::string& command, const Flags& f) {
  report::RunConfig c;
  c.command = report::parse_command(command);
  c.params = f.params;
  c.engine = explore::parse_engine(f.engine);
  c.format = report::parse_format(f.format);
  c.out = f.out;
  c.order = c.command == report::Command::g2 ? 2 : f.order;
  c.params.detection.trunc.n_max = f.n_max.value_or(c.order > 2 ? 5 : 3);
  c.tau_max = f.tau_max;
  c.tau_step = f.tau_step;
  c.kind = explore::parse_kind(f.kind);
  c.phi_fixed = f.phi_fixed;
  c.n_f = f.n_f;
  c.n_phi = f.n_phi;
  c.f_max = f.f_max;
  return c;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Filtered photon correlations of a driven two-level emitter with laser correction"};
  app.require_subcommand(1);

  Flags flags;
  const char* commands[][2] = {
      {"steady", "emitter state and sensor population"},
      {"g2", "zero-delay g2 of the filtered emission"},
      {"gn", "zero-delay g^(n), n = --order"},
      {"g2tau", "delay-resolved g2(tau)"},
      {"map", "g^(n) over the correction laser (F, phi)"},
      {"conditions", "laser settings for perfect antibunching and superbunching"},
      {"optimize", "extremum of g2 over (F, phi)"},
      {"validate", "closed forms against the master-equation oracle"},
      {"convergence", "g2 under coupling and truncation changes"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    const std::string n = name;
    if (n == "gn" || n == "map") sub->add_option("--order", flags.order, "correlation order");
    if (n == "g2tau") {
      sub->add_option("--tau-max", flags.tau_max, "largest delay");
      sub->add_option("--tau-step", flags.tau_step, "delay step");
    }
    if (n == "optimize") {
      sub->add_option("--kind", flags.kind, "min or max")->check(CLI::IsMember({"min", "max"}));
    }
    if (n == "optimize" || n == "map") {
      sub->add_option("--phi-fixed", flags.phi_fixed, "hold phi at this value");
      sub->add_option("--f-max", flags.f_max, "upper end of the F range");
    }
    if (n == "map") {
      sub->add_option("--nf", flags.n_f, "F grid points");
      sub->add_option("--nphi", flags.n_phi, "phi grid points");
    }
  }

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "run a JSON run configuration");
  run_cmd->add_option("--config", config_path, "run configuration file")->required();

  std::string figure = "all";
  std::string out_dir = ".";
  report::FigureOptions figure_options;
  CLI::App* figures = app.add_subcommand("figures", "write figure data and manifests");
  figures->add_option("--kind", figure, "fig1, fig2, fig3 or all")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "all"}));
  figures->add_option("--out-dir", out_dir, "output directory");
  figures->add_option("--nf", figure_options.n_f, "F grid points");
  figures->add_option("--nphi", figure_options.n_phi, "phi grid points");

  std::string manifest_path;
  CLI::App* replay = app.add_subcommand("replay", "rerun every entry of a manifest");
  replay->add_option("--manifest", manifest_path, "manifest file")->required();
  replay->add_option("--out-dir", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open " + config_path);
      return report::run(report::run_config_from_json(nlohmann::json::parse(in)), out, err);
    }
    if (figures->parsed()) {
      std::vector<report::Figure> kinds;
      if (figure == "all") kinds = {report::Figure::fig1, report::Figure::fig2, report::Figure::fig3};
      else kinds = {report::parse_figure(figure)};
      for (auto k : kinds) {
        const auto entries = report::emit_figure_data(k, out_dir, figure_options);
        out << report::figure_name(k) << ": " << entries.size() << " files in " << out_dir
            << '\n';
      }
      return 0;
    }
    if (replay->parsed()) return report::replay_manifest(manifest_path, out_dir, err);
    for (const auto& [name, help] : commands) {
      if (app.got_subcommand(name)) return report::run(to_config(name, flags), out, err);
    }
  } catch (const std::exception& e) {
    err << "heitler: " << e.what() << '\n';
    return report::exit_status(e);
  }
  return 2;
}

}  // namespace heitler::cli

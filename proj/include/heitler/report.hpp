#pragma once

// Run configurations, deterministic CSV/JSON rendering and figure-data
// emission. Everything the command line does goes through execute(), so a
// RunConfig recorded in a manifest replays to the same bytes.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heitler/explore.hpp"
#include "heitler/model.hpp"

namespace heitler::report {

enum class Command { steady, g2, gn, g2tau, map, conditions, optimize, validate, convergence };
Command parse_command(const std::string& name);
const char* command_name(Command c);

enum class Format { csv, json };
Format parse_format(const std::string& name);
const char* format_name(Format f);

struct RunConfig {
  Command command = Command::g2;
  SystemParams params;
  explore::Engine engine = explore::Engine::numeric;
  int order = 2;
  std::optional<double> tau_max;   ///< default 20 / min(Gamma, gamma_sigma)
  std::optional<double> tau_step;  ///< default min(0.01 / gamma_sigma, 0.01 / Gamma)
  explore::OptimumKind kind = explore::OptimumKind::min;
  std::optional<double> phi_fixed;
  int n_f = 121;
  int n_phi = 121;
  double f_max = 6.0;
  std::string out;  ///< empty: standard output
  Format format = Format::csv;
};

/// {"command", "params", "options", "output"}; every field is written.
nlohmann::ordered_json to_json(const RunConfig& config);
/// Inverse of to_json. Missing fields keep defaults, unknown keys raise
/// ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);

/// 12 significant digits. Non-finite values raise NumericalError since no
/// output file may carry them.
std::string format_number(double x);

struct Outcome {
  std::string body;
  int status = 0;  ///< 3 when a numeric result is reported but flagged
  std::string diagnostic;
};

/// Computes and renders; throws the library errors on failure.
Outcome execute(const RunConfig& config);

/// Exit status for an exception escaping execute().
int exit_status(const std::exception& e);

/// execute() plus output handling: the body goes to config.out (or `out`),
/// a one-line diagnostic to `err`. Returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

enum class Figure { fig1, fig2, fig3 };
Figure parse_figure(const std::string& name);
const char* figure_name(Figure f);

struct ManifestEntry {
  std::string file;
  std::string panel;
  std::string description;
  RunConfig config;  ///< config.out is the file name relative to the output directory
};

struct FigureOptions {
  int n_f = 121;
  int n_phi = 121;
  double tau_max = 10.0;
  double tau_step = 0.01;
};

/// Panel definitions with the parameter sets baked in.
std::vector<ManifestEntry> figure_entries(Figure kind, const FigureOptions& options = {});

/// Writes every panel file of `kind` plus <kind>_manifest.json into out_dir.
std::vector<ManifestEntry> emit_figure_data(Figure kind, const std::filesystem::path& out_dir,
                                            const FigureOptions& options = {});

nlohmann::ordered_json manifest_to_json(Figure kind, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> manifest_from_json(const nlohmann::json& j);

/// Reruns every manifest entry into out_dir. Returns the worst exit status.
int replay_manifest(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
                    std::ostream& err);

}  // namespace heitler::report

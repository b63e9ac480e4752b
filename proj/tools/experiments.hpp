#pragma once

// Experiment drivers behind the tdefl CLI. Each command turns a validated
// Config into named tables; the CLI writes them as CSV and records a manifest.

#include "config.hpp"
#include "table.hpp"

#include "tdefl/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tdefl::cli {

struct Plot {
  std::string table;   // source table name
  std::string x;
  std::vector<std::string> ys;
  std::string group;   // split series by this column, optional
  std::string title;
  bool columns = false;
  std::string overlay_table;  // drawn as a line over columns, optional
  std::string overlay_x, overlay_y;
};

struct ExperimentOutput {
  std::vector<Table> tables;
  std::vector<Plot> plots;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> notes;

  const Table& table(const std::string& name) const;
};

struct RunContext {
  unsigned jobs = 1;
};

/// Thrown for invalid numeric ranges in an otherwise well-formed config.
class ConfigRangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// ---------------------------------------------------------------------------
// Reusable building blocks

/// Signed measurements averaged over `seeds` realisations (seed base + t).
struct SimulatedMeans {
  FirstStepSolution first;
  SecondStepSolution second;
  int used = 0;     // realisations that converged
  int failed = 0;
};

SimulatedMeans simulated_means(const ModelParams& m, double gamma, Index p, int seeds, std::uint64_t base_seed,
                               unsigned jobs = 1);

struct SolvedPoint {
  std::optional<FirstStepSolution> first;
  std::optional<SecondStepSolution> second;
  std::string status = "ok";  // ok | below_edge | no_convergence | invalid
};

/// Solves both steps at `gamma`, seeded from the given values.
SolvedPoint solve_point(const ModelParams& m, double gamma, const FirstStepSolution& first_init,
                        const SecondStepSolution& second_init, const SolverConfig& cfg = {});

/// Seed for the second step taken directly from a solved gamma = 1 point or a
/// solved first step: the trivial gamma = 0 configuration.
SecondStepSolution trivial_second_seed(const FirstStepSolution& first);

struct GammaPoint {
  double gamma = 0.0;
  std::optional<SecondStepSolution> solution;
  std::string branch;  // "from_one", "from_zero" or empty when unsolved
};

/// Second-step solutions over an ascending gamma grid. Continuation runs down
/// from gamma = 1; grid points it cannot reach are filled by continuation up
/// from the trivial gamma = 0 solution.
std::vector<GammaPoint> gamma_sweep(const ModelParams& m, const FirstStepSolution& first,
                                    const SecondStepSolution& at_one, const std::vector<double>& grid,
                                    const SolverConfig& cfg = {});

/// Number of strict interior local maxima of a sequence.
int interior_local_maxima(const std::vector<double>& v);

// ---------------------------------------------------------------------------
// Commands

ExperimentOutput run_spectrum(const Config& c, const RunContext& ctx);
ExperimentOutput run_deflate(const Config& c, const RunContext& ctx);
ExperimentOutput run_solve(const Config& c, const RunContext& ctx);
ExperimentOutput run_estimate(const Config& c, const RunContext& ctx);
ExperimentOutput run_improve(const Config& c, const RunContext& ctx);

ExperimentOutput run_command(const std::string& command, const Config& c, const RunContext& ctx);

const std::vector<std::string>& command_names();
/// Keys accepted by `command`, each with a default.
Config command_defaults(const std::string& command);
/// Merges defaults, rejects unknown keys and validates ranges.
Config effective_config(const std::string& command, const Config& user);

struct Preset {
  std::string name;
  std::string command;
  std::string description;
  Config config;
  long full_seeds = 0;  // seeds at full scale, 0 when the preset is not seeded
};

const std::vector<Preset>& presets();
const Preset& preset(const std::string& name);

/// Column documentation for --help.
std::string schema_help();

}  // namespace tdefl::cli

/// @file cli.hpp
/// @brief Run configuration and the experiment drivers behind the srmg tool.
///
/// Configuration is a flat key=value file plus command-line overrides. Every
/// driver writes CSV files whose first line echoes the configuration, and a
/// JSON summary. CSV contents never include timings, so identical
/// configurations produce identical files.

#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "srmg/dd.hpp"
#include "srmg/mg.hpp"
#include "srmg/sr.hpp"

namespace srmg {

enum class SolverKind { conventional, sr, vcycle_iterative };

struct RunConfig {
  SolverKind solver = SolverKind::sr;
  ProcessGrid procs;
  int pN0V = 4;
  int K = 4;
  /// When >= 0 the conventional solvers use a fine grid of (2,1,1)*2^refinements
  /// instead of the pN0V/K hierarchy.
  int refinements = -1;
  ScheduleKind schedule = ScheduleKind::linear;
  int A = 4;
  int B = 1;
  int J1 = 4;
  int max_reach = 1;
  CycleParams cycle;
  double rtol = 1e-4;
  int max_cycles = 50;

  // Sweep axes.
  std::vector<int> sweep_A{2, 4, 6, 8};
  std::vector<int> sweep_B{0, 1, 2, 3};
  /// Table-1 columns as (pN0V, K) pairs.
  std::vector<std::pair<int, int>> columns{{4, 4}};
  std::vector<int> sweep_pN0V{16, 8, 4};
  /// refinements for the convergence study
  std::vector<int> sweep_refinements{5, 6, 7};

  std::string out_dir = "out";
  bool large = false;
  bool check = false;

  SRConfig sr_config() const;
  /// "solver=sr P=4x2x2 pN0V=4 K=4 schedule=linear A=4 B=1 ..."
  std::string echo() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Reads key=value lines; '#' starts a comment. Throws ConfigError.
KeyValues load_config_file(const std::string& path);
/// Applies key=value pairs on top of cfg. Unknown keys and malformed values
/// throw ConfigError.
void apply_config(RunConfig& cfg, const KeyValues& kv);
/// "4x2x2" -> {4,2,2}
Int3 parse_ranks(const std::string& s);

/// Exit codes shared by every command.
enum ExitCode { kOk = 0, kConfigError = 1, kSolveFailure = 2, kCheckFailure = 3 };

int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_sweep_table1(const RunConfig& cfg, std::ostream& log);
int cmd_sweep_pn0v(const RunConfig& cfg, std::ostream& log);
int cmd_sweep_mbs(const RunConfig& cfg, std::ostream& log);
int cmd_comm(const RunConfig& cfg, std::ostream& log);
int cmd_convergence(const RunConfig& cfg, std::ostream& log);

using Command = int (*)(const RunConfig&, std::ostream&);
/// Runs cmd, mapping configuration errors to kConfigError and any other
/// exception to kSolveFailure. Diagnostics go to err.
int run_guarded(Command cmd, const RunConfig& cfg, std::ostream& log, std::ostream& err);

/// Conventional and SR FMG on the same hierarchy; conventional runs first and
/// is released before the SR solver allocates.
struct Comparison {
  SolveReport conv;
  SolveReport sr;
  CommCounters sr_horizontal_fine;  // levels k >= 1
  CommCounters sr_vertical_fine;
  double e_r() const { return error_ratio(sr, conv); }
};
Comparison compare_sr(const ProcessGrid& procs, const SRConfig& cfg, const CycleParams& params);

}  // namespace srmg

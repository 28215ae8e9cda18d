/// @file commmodel.hpp
/// @brief Analytic communication model (phase table, visit counts, bisection
/// traffic) and reconciliation of an instrumented ledger against it.

#pragma once

#include <string>
#include <vector>

#include "srmg/dd.hpp"
#include "srmg/mg.hpp"

namespace srmg {

/// FMG level visits for levels 0..M: exact sum of (j+1), and (M+1)M/2 as
/// quoted in the asymptotic model.
struct VisitCount {
  long long exact = 0;
  long long approx = 0;
};
VisitCount grid_visits(int M);

/// factor * (h c_H + v c_V), in phases per level visit.
struct PhaseExpr {
  int factor = 1;
  int h = 0;
  int v = 0;

  std::string to_string() const;
  friend bool operator==(const PhaseExpr&, const PhaseExpr&) = default;
};

struct PhaseRow {
  std::string grids;
  PhaseExpr near;
  PhaseExpr far;
  friend bool operator==(const PhaseRow&, const PhaseRow&) = default;
};

struct PhaseTable {
  int M = 0;
  int K = 0;
  std::vector<PhaseRow> rows;  // coarse, conventional fine, SR fine
  std::string scale = "log2(N)^2/8";

  std::string to_csv() const;
  std::string to_json() const;
};
PhaseTable phase_table(int M, int K);

enum class Method { conventional, sr };

/// Model traffic across a bisection of an N^3 grid: N^2 conventional,
/// N log2(N)^3 segmental refinement.
double bisection(double N, Method m);
/// N = 2^lo .. 2^hi: N,conventional,sr,ratio
std::string bisection_csv(int lo_exp = 4, int hi_exp = 14);

/// Ranks within one step (including diagonals) of rank's position in the
/// active process grid of a level.
int active_neighbors(const Level& level, const ProcessGrid& procs, int rank);

struct Fact {
  std::string name;
  long long expected = 0;
  long long observed = 0;
  bool pass() const { return expected == observed; }
};

struct ReconcileReport {
  std::vector<Fact> facts;
  bool all_pass() const;
  /// fact,expected,observed,status
  std::string to_csv() const;
};

/// Checks an FMG run's ledger against the counting model: horizontal phases
/// per visit on conventional levels, messages received per rank, vertical
/// phases per visit, silence on SR levels, and total visits.
ReconcileReport reconcile(const CommLedger& ledger, const LevelHierarchy& hier,
                          const CycleParams& params, Method method);

}  // namespace srmg

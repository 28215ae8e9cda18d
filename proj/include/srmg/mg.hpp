/// @file mg.hpp
/// @brief Conventional distributed FAS multigrid: V-cycle, full multigrid
/// driver, and solve reports.

#pragma once

#include <string>
#include <vector>

#include "srmg/dd.hpp"
#include "srmg/smooth.hpp"

namespace srmg {

/// F(alpha, nu1, nu2): alpha is the smoother degree applied after each FMG
/// interpolation, nu1/nu2 the pre/post smoother degrees inside a V-cycle.
struct CycleParams {
  int alpha = 1;
  int nu1 = 2;
  int nu2 = 2;
  int n_vcycles = 1;
  double cheb_lo = 0.1;
  double cheb_hi = 1.1;
  /// false replaces the solution restriction by zero (correction scheme).
  bool restrict_solution = true;

  ChebConfig cheb(int degree) const { return {degree, cheb_lo, cheb_hi}; }
};

struct LevelReport {
  int k = 0;
  Int3 cells;
  double h = 0.0;
  double error_inf = 0.0;
  double residual_inf = 0.0;
};

struct SolveReport {
  std::vector<LevelReport> levels;  // coarsest first
  long long phases = 0;
  long long messages = 0;
  double wall_seconds = 0.0;

  const LevelReport& finest() const { return levels.back(); }
  /// level,N,error_inf,residual_inf
  std::string to_csv() const;
};

/// One rank's storage on one level. `box` is the region the rank updates
/// (owned cells, or the compute region on segmental-refinement levels).
struct Patch {
  Box box;
  Field u;    // solution
  Field f;    // right-hand side sampled from the problem
  Field rhs;  // FAS right-hand side when visited as a coarse grid
  Field t;    // snapshot of the restricted solution
  Field res;  // residual / scratch
  Field dir;  // smoother direction / scratch

  Patch() = default;
  Patch(const Box& box, double h, bool coarse_storage);
};

/// Pointer-to-member selecting which right-hand side a cycle uses.
using RhsField = Field Patch::*;

class ConventionalSolver {
 public:
  /// Solves on levels [0, top_index] of the hierarchy (top_index < 0 means the
  /// finest level).
  ConventionalSolver(const LevelHierarchy& hier, const CycleParams& params,
                     CommLedger* ledger = nullptr, int top_index = -1);

  /// Full multigrid (coarse solve, then interpolate/smooth/V-cycle per level).
  SolveReport fmg();
  /// FAS V-cycle on level idx against the given right-hand side.
  void vcycle(int idx, RhsField rhs);
  /// Additional V-cycles on the top level until ||f - L u|| / ||f|| <= rtol.
  int iterate(double rtol, int max_cycles);

  LevelReport measure(int idx);
  SolveReport report();

  const LevelHierarchy& hierarchy() const { return hier_; }
  const CycleParams& params() const { return params_; }
  int top_index() const { return top_; }
  std::vector<Patch>& patches(int idx) { return levels_[static_cast<std::size_t>(idx)]; }
  FieldSet fields(int idx, Field Patch::*member);

  /// Exchange + boundary fill of `member` on level idx. Counted when
  /// `counted` and a ledger is attached.
  void refresh(int idx, Field Patch::*member, bool counted = true);
  void smooth(int idx, int degree, RhsField rhs);
  /// Copies of the finest solution owned by each rank gathered into one field.
  Field gather_solution(int idx) const;

 private:
  const LevelHierarchy& hier_;
  CycleParams params_;
  CommLedger* ledger_;
  int top_;
  std::vector<std::vector<Patch>> levels_;
};

/// Error reduction per V-cycle needed by FMG for algebraic/discretization
/// error ratio r (second order, refinement ratio two): r / (4r + 3).
double gamma_of_r(double r);

}  // namespace srmg

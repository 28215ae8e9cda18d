/// @file sr.hpp
/// @brief Segmental refinement: buffer schedules, per-rank region system, and
/// the SR full multigrid / V-cycle drivers layered on the conventional solver.
///
/// Levels k = 1..K are processed rank by rank on private compute regions with
/// no intra-grid exchange. Ghost cells inside the domain (GSR) are written only
/// by interpolation from the level below; boundary ghosts (GBC) follow the
/// usual reflection rule.

#pragma once

#include <vector>

#include "srmg/dd.hpp"
#include "srmg/mg.hpp"

namespace srmg {

/// A configuration whose buffers cannot be realised on the given hierarchy.
/// The parameter sweeps report these cells as "NA".
class InfeasibleConfig : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

enum class ScheduleKind { linear, mbs };

struct SRConfig {
  int K = 4;
  ScheduleKind schedule = ScheduleKind::linear;
  int A = 4;
  int B = 1;
  int J1 = 4;  // mbs only
  int pN0V = 4;
  /// Largest allowed buffer, in multiples of the genuine region's shortest
  /// edge. 0 disables the limit.
  int max_reach = 1;
};

/// Buffer width J_k for 1 <= k <= K. Linear: 2*floor((A + B(K-k))/2);
/// mbs: J1 * 2^(k-1).
int buffer_schedule(const SRConfig& cfg, int k);

/// Regions of one rank on one level.
struct SRRegions {
  Box V;       // genuine (owned) cells
  Box C;       // compute region: grow(V, J_k) clipped to the domain
  Region G;    // grow(C, 1) \ C
  Region GBC;  // G outside the domain
  Region GSR;  // G inside the domain, frozen between interpolations
  Box F;       // cells of this level fully supported by level k+1's compute region
};

/// regions[k][rank] for k = 0..K. On k = 0 the compute region is the owned
/// box and nothing is buffered. Throws InfeasibleConfig when a buffer exceeds
/// the reach limit or when a rank's level-(k-1) storage cannot supply the
/// interpolation stencil of its level-k compute region.
std::vector<std::vector<SRRegions>> compute_regions(const LevelHierarchy& hier,
                                                    const SRConfig& cfg);

/// Hierarchy whose transition level gives every rank a pN0V^3 cube and which
/// has cfg.K refinements above it.
LevelHierarchy sr_hierarchy(const ProcessGrid& procs, const SRConfig& cfg,
                            const ProblemSpec& spec = {});

class SRSolver {
 public:
  SRSolver(const LevelHierarchy& hier, const SRConfig& cfg, const CycleParams& params,
           CommLedger* ledger = nullptr);

  /// Conventional FMG up to the transition level, then interpolate, smooth
  /// and V-cycle on each SR level.
  SolveReport solve();
  /// SR V-cycle entered on level k >= 1.
  void vcycle(int k, RhsField rhs);

  /// Error/residual over the genuine cells of level k >= 1.
  LevelReport measure(int k);

  const SRRegions& regions(int k, int rank) const {
    return regions_[static_cast<std::size_t>(k)][static_cast<std::size_t>(rank)];
  }
  Patch& patch(int k, int rank) {
    return patches_[static_cast<std::size_t>(k)][static_cast<std::size_t>(rank)];
  }
  ConventionalSolver& conventional() { return coarse_; }

 private:
  const Level& level(int k) const { return hier_.at_k(k); }
  void smooth(int k, int degree, RhsField rhs);
  void interpolate_first(int k);

  const LevelHierarchy& hier_;
  SRConfig cfg_;
  CycleParams params_;
  CommLedger* ledger_;
  std::vector<std::vector<SRRegions>> regions_;
  ConventionalSolver coarse_;
  std::vector<std::vector<Patch>> patches_;  // [k][rank], k = 1..K; index 0 unused
};

/// e_SR / e_conv on the finest level.
double error_ratio(const SolveReport& sr, const SolveReport& conv);

}  // namespace srmg

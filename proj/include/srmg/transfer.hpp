/// @file transfer.hpp
/// @brief Inter-grid transfers for refinement ratio two on cell-centered grids.

#pragma once

#include "srmg/grid.hpp"

namespace srmg {

enum class ProlongMode { set, add_correction };

/// coarse(I) = mean of the 8 children of I, for I in rc. Used for both solution
/// and residual restriction.
void restrict_avg(const Field& fine, Field& coarse, const Box& rc);
void restrict_avg(const Field& fine, Field& coarse, const Region& rc);

/// Coarse cells read by prolong_trilinear when writing fine box rf.
Box prolong_footprint(const Box& rf);

/// Cell-centered trilinear interpolation: per dimension 3/4 of the parent and
/// 1/4 of the parent's neighbor on the child's side. Coarse values over the
/// footprint (including boundary ghosts) must be current.
void prolong_trilinear(const Field& coarse, Field& fine, const Box& rf, ProlongMode mode);
void prolong_trilinear(const Field& coarse, Field& fine, const Region& rf, ProlongMode mode);

/// Interpolation between FMG levels; the same linear operator in set mode.
inline void fmg_prolong(const Field& coarse, Field& fine, const Box& rf) {
  prolong_trilinear(coarse, fine, rf, ProlongMode::set);
}
inline void fmg_prolong(const Field& coarse, Field& fine, const Region& rf) {
  prolong_trilinear(coarse, fine, rf, ProlongMode::set);
}

}  // namespace srmg

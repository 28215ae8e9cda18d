/// @file smooth.hpp
/// @brief Chebyshev polynomial smoothing and the coarsest-grid solver.

#pragma once

#include <functional>
#include <span>
#include <stdexcept>

#include "srmg/grid.hpp"

namespace srmg {

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Chebyshev target interval is [lo_frac, hi_frac] times spectral_bound(h).
struct ChebConfig {
  int degree = 2;
  double lo_frac = 0.1;
  double hi_frac = 1.1;
};

/// Gershgorin bound on the spectrum of -L_h: (8/3 + 12/6 + 8/12)/h^2.
double spectral_bound(double h);

/// One rank's share of a smoothing step. res and dir are scratch storage with
/// the same layout as u.
struct SmoothPatch {
  Field* u = nullptr;
  const Field* rhs = nullptr;
  Field* res = nullptr;
  Field* dir = nullptr;
  Box region;
};

/// Refreshes ghost cells of every patch's u before an operator application.
using GhostRefresh = std::function<void()>;

/// Applies the degree-d Chebyshev polynomial in -L to the residual equation
/// on each patch region, with exactly d operator applications per patch (each
/// preceded by one refresh). Degree 0 is a no-op.
void chebyshev(std::span<SmoothPatch> patches, const ChebConfig& cfg, const GhostRefresh& refresh);

/// Single-patch convenience form.
void chebyshev(Field& u, const Field& rhs, const ChebConfig& cfg, const Box& region, Field& res,
               Field& dir, const GhostRefresh& refresh);

/// Conjugate gradients on -L u = -f over the whole domain (u.box() == domain)
/// until ||f - L u||_inf <= rel_tol * ||f||_inf. Throws SolverFailure when the
/// iteration cap is reached first.
struct CoarseSolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};
CoarseSolveStats coarse_solve(Field& u, const Field& f, const Box& domain, double rel_tol = 1e-10);

}  // namespace srmg

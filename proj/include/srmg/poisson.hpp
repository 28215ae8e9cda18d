/// @file poisson.hpp
/// @brief Model problem: 27-point cell-centered Laplacian on a rectangular
/// domain with homogeneous Dirichlet data imposed through ghost cells, plus the
/// manufactured solution u = prod_d (x_d^4 - R_d^2 x_d^2) and its Laplacian.

#pragma once

#include <array>
#include <cstdint>

#include "srmg/grid.hpp"

namespace srmg {

/// Rectangular domain [0,R_1]x[0,R_2]x[0,R_3] with u = 0 on the boundary.
struct ProblemSpec {
  Real3 extent{2.0, 1.0, 1.0};
  Real3 origin{0.0, 0.0, 0.0};

  /// Cells covering the domain at spacing h; throws if the boundary does not
  /// land on cell faces.
  Box domain_box(double h) const;
};

/// Trilinear finite-element style Laplacian: center -8/3, edges +1/6,
/// corners +1/12, faces 0 (all scaled by 1/h^2).
struct Stencil27 {
  static constexpr double kCenter = -8.0 / 3.0;
  static constexpr double kFace = 0.0;
  static constexpr double kEdge = 1.0 / 6.0;
  static constexpr double kCorner = 1.0 / 12.0;

  /// Unscaled weight for an offset in {-1,0,1}^3.
  static constexpr double weight(int dx, int dy, int dz) {
    const int nz = (dx != 0) + (dy != 0) + (dz != 0);
    switch (nz) {
      case 0: return kCenter;
      case 1: return kFace;
      case 2: return kEdge;
      default: return kCorner;
    }
  }
};

double exact_u(const Real3& x, const ProblemSpec& spec = {});
double rhs_f(const Real3& x, const ProblemSpec& spec = {});

/// out(i) = sum_o w(o) u(i+o) / h^2 for i in r. u's ghosts adjacent to r must
/// be current.
void apply_operator(const Field& u, Field& out, const Box& r);
void apply_operator(const Field& u, Field& out, const Region& r);

/// out = f - L u on r.
void residual(const Field& u, const Field& f, Field& out, const Box& r);
void residual(const Field& u, const Field& f, Field& out, const Region& r);

/// Sets every storage cell of u outside the domain to (-1)^m times its mirror
/// image, m being the number of dimensions in which the cell lies outside.
/// Cells inside the domain are untouched.
void fill_bc_ghosts(Field& u, const Box& domain);

/// Samples fn at cell centers over r.
template <class Fn>
void sample(Field& f, const Region& r, Fn&& fn, const ProblemSpec& spec = {}) {
  require_in_storage(f, r, "sample");
  for (const auto& b : r.boxes())
    for_each_cell(b, [&](int i, int j, int k) {
      f(i, j, k) = fn(cell_center({i, j, k}, f.h(), spec.origin));
    });
}

/// max over r of |u - exact_u|.
double error_inf(const Field& u, const Region& r, const ProblemSpec& spec = {});

/// Number of apply_operator / residual box sweeps since the last reset.
std::uint64_t operator_applications();
void reset_operator_applications();

}  // namespace srmg

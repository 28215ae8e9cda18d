#include "srmg/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace srmg {

namespace {

std::uint64_t g_applications = 0;

double factor(double x, double r) { return x * x * x * x - r * r * x * x; }
double factor_dd(double x, double r) { return 12.0 * x * x - 2.0 * r * r; }

// out = L u on b, or f - L u when f is given.
void stencil_kernel(const Field& u, const Field* f, Field& out, const Box& b) {
  if (b.empty()) return;
  require_in_storage(u, Region(grow(b, 1)), "apply_operator");
  require_in_storage(out, Region(b), "apply_operator");
  if (f != nullptr) require_in_storage(*f, Region(b), "residual");
  ++g_applications;

  const double inv_h2 = 1.0 / (u.h() * u.h());
  const double wc = Stencil27::kCenter * inv_h2;
  const double we = Stencil27::kEdge * inv_h2;
  const double wk = Stencil27::kCorner * inv_h2;
  const auto sy = static_cast<std::ptrdiff_t>(u.stride_y());
  const auto sz = static_cast<std::ptrdiff_t>(u.stride_z());
  const double* ud = u.data().data();
  double* od = out.data().data();
  const double* fd = f != nullptr ? f->data().data() : nullptr;
  const int nx = b.extent(0);

  for (int k = b.lo()[2]; k <= b.hi()[2]; ++k) {
    for (int j = b.lo()[1]; j <= b.hi()[1]; ++j) {
      const double* c = ud + u.index(b.lo()[0], j, k);
      // Rows sharing an edge with the center row (one of y/z offset nonzero)
      const double* s0 = c - sy;
      const double* s1 = c + sy;
      const double* s2 = c - sz;
      const double* s3 = c + sz;
      // Diagonal rows (both y and z offsets nonzero)
      const double* d0 = c - sy - sz;
      const double* d1 = c + sy - sz;
      const double* d2 = c - sy + sz;
      const double* d3 = c + sy + sz;
      double* o = od + out.index(b.lo()[0], j, k);
      const double* fr = fd != nullptr ? fd + f->index(b.lo()[0], j, k) : nullptr;
      for (int i = 0; i < nx; ++i) {
        const double edge = (s0[i - 1] + s0[i + 1]) + (s1[i - 1] + s1[i + 1]) +
                            (s2[i - 1] + s2[i + 1]) + (s3[i - 1] + s3[i + 1]) +
                            (d0[i] + d1[i] + d2[i] + d3[i]);
        const double corner = (d0[i - 1] + d0[i + 1]) + (d1[i - 1] + d1[i + 1]) +
                              (d2[i - 1] + d2[i + 1]) + (d3[i - 1] + d3[i + 1]);
        const double lu = wc * c[i] + we * edge + wk * corner;
        o[i] = fr != nullptr ? fr[i] - lu : lu;
      }
    }
  }
}

}  // namespace

Box ProblemSpec::domain_box(double h) const {
  Int3 n;
  for (int d = 0; d < 3; ++d) {
    const double cells = extent[d] / h;
    n[d] = static_cast<int>(std::lround(cells));
    if (n[d] < 1 || std::abs(cells - n[d]) > 1e-9) {
      std::ostringstream msg;
      msg << "domain extent " << extent[d] << " is not a whole number of cells at h=" << h;
      throw std::invalid_argument(msg.str());
    }
  }
  return Box::from_extent(n);
}

double exact_u(const Real3& x, const ProblemSpec& spec) {
  double u = 1.0;
  for (int d = 0; d < 3; ++d) u *= factor(x[d] - spec.origin[d], spec.extent[d]);
  return u;
}

double rhs_f(const Real3& x, const ProblemSpec& spec) {
  double f = 0.0;
  for (int d = 0; d < 3; ++d) {
    double term = factor_dd(x[d] - spec.origin[d], spec.extent[d]);
    for (int e = 0; e < 3; ++e)
      if (e != d) term *= factor(x[e] - spec.origin[e], spec.extent[e]);
    f += term;
  }
  return f;
}

void apply_operator(const Field& u, Field& out, const Box& r) {
  stencil_kernel(u, nullptr, out, r);
}

void apply_operator(const Field& u, Field& out, const Region& r) {
  for (const auto& b : r.boxes()) apply_operator(u, out, b);
}

void residual(const Field& u, const Field& f, Field& out, const Box& r) {
  stencil_kernel(u, &f, out, r);
}

void residual(const Field& u, const Field& f, Field& out, const Region& r) {
  for (const auto& b : r.boxes()) residual(u, f, out, b);
}

void fill_bc_ghosts(Field& u, const Box& domain) {
  const Box& s = u.storage();
  if (domain.contains(s)) return;
  const Int3 dlo = domain.lo();
  const Int3 dhi = domain.hi();
  const Region outside_boxes = subtract(s, domain);
  for (const auto& outside_box : outside_boxes.boxes()) {
    for_each_cell(outside_box, [&](int i, int j, int k) {
      const Int3 c{i, j, k};
      Int3 m = c;
      int outside = 0;
      for (int d = 0; d < 3; ++d) {
        if (c[d] < dlo[d]) {
          m[d] = 2 * dlo[d] - 1 - c[d];
          ++outside;
        } else if (c[d] > dhi[d]) {
          m[d] = 2 * dhi[d] + 1 - c[d];
          ++outside;
        }
      }
      const double v = u.at(m);
      u(c) = (outside % 2 == 0) ? v : -v;
    });
  }
}

double error_inf(const Field& u, const Region& r, const ProblemSpec& spec) {
  require_in_storage(u, r, "error_inf");
  double m = 0.0;
  for (const auto& b : r.boxes())
    for_each_cell(b, [&](int i, int j, int k) {
      const double e = u(i, j, k) - exact_u(cell_center({i, j, k}, u.h(), spec.origin), spec);
      m = std::max(m, std::abs(e));
    });
  return m;
}

std::uint64_t operator_applications() { return g_applications; }
void reset_operator_applications() { g_applications = 0; }

}  // namespace srmg

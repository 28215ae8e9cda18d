#include "srmg/smooth.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "srmg/poisson.hpp"

namespace srmg {

double spectral_bound(double h) {
  const double abs_sum = -Stencil27::kCenter + 12.0 * Stencil27::kEdge + 8.0 * Stencil27::kCorner;
  return abs_sum / (h * h);
}

void chebyshev(std::span<SmoothPatch> patches, const ChebConfig& cfg, const GhostRefresh& refresh) {
  if (cfg.degree <= 0 || patches.empty()) return;
  if (!(cfg.lo_frac > 0.0 && cfg.lo_frac < cfg.hi_frac))
    throw std::invalid_argument("chebyshev: need 0 < lo_frac < hi_frac");

  const double bound = spectral_bound(patches.front().u->h());
  const double a = cfg.lo_frac * bound;
  const double b = cfg.hi_frac * bound;
  const double theta = 0.5 * (b + a);
  const double delta = 0.5 * (b - a);
  const double sigma = theta / delta;
  double rho = 1.0 / sigma;

  // In terms of A = -L the residual is b - A u = -(rhs - L u), so every
  // update below carries a minus sign on the L-residual.
  refresh();
  for (auto& p : patches) {
    residual(*p.u, *p.rhs, *p.res, p.region);
    for_each_cell(p.region, [&](int i, int j, int k) {
      const double d = -(*p.res)(i, j, k) / theta;
      (*p.dir)(i, j, k) = d;
      (*p.u)(i, j, k) += d;
    });
  }
  for (int step = 1; step < cfg.degree; ++step) {
    const double rho_next = 1.0 / (2.0 * sigma - rho);
    const double c_dir = rho_next * rho;
    const double c_res = 2.0 * rho_next / delta;
    refresh();
    for (auto& p : patches) {
      residual(*p.u, *p.rhs, *p.res, p.region);
      for_each_cell(p.region, [&](int i, int j, int k) {
        const double d = c_dir * (*p.dir)(i, j, k) - c_res * (*p.res)(i, j, k);
        (*p.dir)(i, j, k) = d;
        (*p.u)(i, j, k) += d;
      });
    }
    rho = rho_next;
  }
}

void chebyshev(Field& u, const Field& rhs, const ChebConfig& cfg, const Box& region, Field& res,
               Field& dir, const GhostRefresh& refresh) {
  SmoothPatch p{&u, &rhs, &res, &dir, region};
  chebyshev(std::span<SmoothPatch>(&p, 1), cfg, refresh);
}

namespace {

double dot(const Field& a, const Field& b, const Box& r) {
  double s = 0.0;
  for_each_cell(r, [&](int i, int j, int k) { s += a(i, j, k) * b(i, j, k); });
  return s;
}

}  // namespace

CoarseSolveStats coarse_solve(Field& u, const Field& f, const Box& domain, double rel_tol) {
  if (!(u.box() == domain)) throw std::invalid_argument("coarse_solve: u must cover the domain");
  const Region all(domain);
  CoarseSolveStats stats;
  const double fnorm = region_inf_norm(f, all);
  if (fnorm == 0.0) {
    u.fill(0.0);
    return stats;
  }

  Field r(domain, 1, u.h());
  Field p(domain, 1, u.h());
  Field ap(domain, 1, u.h());

  // r holds f - L u = -(b - A u); p and the recurrence work on -r directly.
  fill_bc_ghosts(u, domain);
  residual(u, f, r, domain);
  for_each_cell(domain, [&](int i, int j, int k) { p(i, j, k) = -r(i, j, k); });
  double rr = dot(r, r, domain);

  const long long n = domain.volume();
  const int max_iter = static_cast<int>(10 * n + 100);
  auto true_relres = [&] {
    fill_bc_ghosts(u, domain);
    residual(u, f, ap, domain);
    return region_inf_norm(ap, all) / fnorm;
  };

  for (int it = 0; it < max_iter; ++it) {
    stats.iterations = it;
    if (std::sqrt(rr) <= 0.1 * rel_tol * fnorm || rr == 0.0) {
      stats.relative_residual = true_relres();
      if (stats.relative_residual <= rel_tol) return stats;
    }
    fill_bc_ghosts(p, domain);
    apply_operator(p, ap, domain);
    // A p = -L p
    const double pap = -dot(p, ap, domain);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    for_each_cell(domain, [&](int i, int j, int k) {
      u(i, j, k) += alpha * p(i, j, k);
      r(i, j, k) -= alpha * ap(i, j, k);  // r = f - L u
    });
    const double rr_next = dot(r, r, domain);
    const double beta = rr_next / rr;
    rr = rr_next;
    for_each_cell(domain, [&](int i, int j, int k) { p(i, j, k) = -r(i, j, k) + beta * p(i, j, k); });
  }
  stats.relative_residual = true_relres();
  if (stats.relative_residual <= rel_tol) return stats;
  std::ostringstream msg;
  msg << "coarse_solve: relative residual " << stats.relative_residual << " after "
      << stats.iterations << " iterations exceeds " << rel_tol;
  throw SolverFailure(msg.str());
}

}  // namespace srmg

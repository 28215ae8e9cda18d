#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "srmg/poisson.hpp"
#include "srmg/smooth.hpp"

using namespace srmg;

namespace {

struct Problem {
  double h = 0.125;
  Box domain = ProblemSpec{}.domain_box(0.125);
  Field u{domain, 1, h};
  Field f{domain, 1, h};
  Field res{domain, 1, h};
  Field dir{domain, 1, h};

  Problem() {
    sample(f, Region(domain), [](const Real3& x) { return rhs_f(x); });
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for_each_cell(domain, [&](int i, int j, int k) { u(i, j, k) = d(rng); });
  }
  double residual_inf() {
    fill_bc_ghosts(u, domain);
    residual(u, f, res, domain);
    double m = 0.0;
    for_each_cell(domain, [&](int i, int j, int k) { m = std::max(m, std::abs(res(i, j, k))); });
    return m;
  }
};

}  // namespace

TEST_CASE("spectral bound is the Gershgorin radius") {
  CHECK(spectral_bound(1.0) == doctest::Approx(16.0 / 3.0));
  CHECK(spectral_bound(0.5) == doctest::Approx(64.0 / 3.0));
}

TEST_CASE("power iteration stays below the spectral bound") {
  Problem p;
  Field v = p.u;
  Field w(p.domain, 1, p.h);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    fill_bc_ghosts(v, p.domain);
    apply_operator(v, w, p.domain);
    double norm = 0.0;
    for_each_cell(p.domain, [&](int i, int j, int k) { norm = std::max(norm, std::abs(w(i, j, k))); });
    double vn = 0.0;
    for_each_cell(p.domain, [&](int i, int j, int k) { vn = std::max(vn, std::abs(v(i, j, k))); });
    lambda = norm / vn;
    for_each_cell(p.domain, [&](int i, int j, int k) { v(i, j, k) = w(i, j, k) / norm; });
  }
  CHECK(lambda <= spectral_bound(p.h));
  CHECK(lambda > 0.5 * spectral_bound(p.h));
}

TEST_CASE("chebyshev applies the operator exactly degree times") {
  for (int degree : {0, 1, 2, 3, 5}) {
    Problem p;
    int refreshes = 0;
    reset_operator_applications();
    chebyshev(p.u, p.f, ChebConfig{degree, 0.1, 1.1}, p.domain, p.res, p.dir, [&] {
      ++refreshes;
      fill_bc_ghosts(p.u, p.domain);
    });
    CHECK(operator_applications() == static_cast<std::uint64_t>(degree));
    CHECK(refreshes == degree);
  }
}

TEST_CASE("degree-one chebyshev is a damped Richardson step") {
  Problem p;
  Field before = p.u;
  fill_bc_ghosts(before, p.domain);
  Field r(p.domain, 1, p.h);
  residual(before, p.f, r, p.domain);
  chebyshev(p.u, p.f, ChebConfig{1, 0.1, 1.1}, p.domain, p.res, p.dir,
            [&] { fill_bc_ghosts(p.u, p.domain); });
  // Single step toward the interval midpoint: u - r / theta with theta = 0.6 * bound.
  const double theta = 0.6 * spectral_bound(p.h);
  for_each_cell(p.domain, [&](int i, int j, int k) {
    CHECK(p.u(i, j, k) == doctest::Approx(before(i, j, k) - r(i, j, k) / theta).epsilon(1e-12));
  });
}

TEST_CASE("chebyshev smoothing does not increase the residual") {
  Problem p;
  const double r0 = p.residual_inf();
  chebyshev(p.u, p.f, ChebConfig{2, 0.1, 1.1}, p.domain, p.res, p.dir,
            [&] { fill_bc_ghosts(p.u, p.domain); });
  CHECK(p.residual_inf() < r0);
}

TEST_CASE("coarse solve reaches its tolerance") {
  const double h = 0.5;
  const Box domain = ProblemSpec{}.domain_box(h);
  Field u(domain, 1, h), f(domain, 1, h);
  sample(f, Region(domain), [](const Real3& x) { return rhs_f(x); });
  const CoarseSolveStats st = coarse_solve(u, f, domain, 1e-12);
  CHECK(st.relative_residual <= 1e-12);
  CHECK(st.iterations > 0);
  Field r(domain, 1, h);
  fill_bc_ghosts(u, domain);
  residual(u, f, r, domain);
  double fm = 0.0, rm = 0.0;
  for_each_cell(domain, [&](int i, int j, int k) {
    fm = std::max(fm, std::abs(f(i, j, k)));
    rm = std::max(rm, std::abs(r(i, j, k)));
  });
  CHECK(rm <= 1e-12 * fm);
}

TEST_CASE("exact discrete solutions are fixed points of the smoother") {
  Problem p;
  fill_bc_ghosts(p.u, p.domain);
  apply_operator(p.u, p.f, p.domain);
  const Field before = p.u;
  chebyshev(p.u, p.f, ChebConfig{2, 0.1, 1.1}, p.domain, p.res, p.dir,
            [&] { fill_bc_ghosts(p.u, p.domain); });
  for_each_cell(p.domain, [&](int i, int j, int k) {
    CHECK(std::abs(p.u(i, j, k) - before(i, j, k)) <= 1e-12 * (1.0 + std::abs(before(i, j, k))));
  });
}

TEST_CASE("coarse solve is linear and maps zero to zero") {
  const double h = 0.5;
  const Box domain = ProblemSpec{}.domain_box(h);
  Field f(domain, 1, h), f3(domain, 1, h), u(domain, 1, h), u3(domain, 1, h), z(domain, 1, h), zf(domain, 1, h);
  sample(f, Region(domain), [](const Real3& x) { return rhs_f(x); });
  sample(f3, Region(domain), [](const Real3& x) { return -3.0 * rhs_f(x); });
  coarse_solve(u, f, domain);
  coarse_solve(u3, f3, domain);
  coarse_solve(z, zf, domain);
  for_each_cell(domain, [&](int i, int j, int k) {
    CHECK(u3(i, j, k) == doctest::Approx(-3.0 * u(i, j, k)).epsilon(1e-9));
    CHECK(z(i, j, k) == 0.0);
  });
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "srmg/transfer.hpp"

using namespace srmg;

TEST_CASE("prolongation weights form a partition of unity") {
  const Box cb({0, 0, 0}, {3, 3, 3});
  Field c(cb, 1, 0.5, 2.5);
  Field f(refine(cb), 1, 0.25);
  prolong_trilinear(c, f, refine(cb), ProlongMode::set);
  for_each_cell(refine(cb), [&](int i, int j, int k) { CHECK(f(i, j, k) == 2.5); });
}

TEST_CASE("prolongation reproduces linear functions") {
  const double H = 0.5;
  const Box cb({0, 0, 0}, {3, 3, 3});
  Field c(cb, 1, H);
  auto lin = [](const Real3& x) { return 1.0 + 2 * x[0] - 3 * x[1] + 0.5 * x[2]; };
  for_each_cell(c.storage(), [&](int i, int j, int k) { c(i, j, k) = lin(cell_center({i, j, k}, H)); });
  const Box rf = refine(cb);
  Field f(rf, 1, H / 2);
  prolong_trilinear(c, f, rf, ProlongMode::set);
  for_each_cell(rf, [&](int i, int j, int k) {
    CHECK(f(i, j, k) == doctest::Approx(lin(cell_center({i, j, k}, H / 2))).epsilon(1e-14));
  });
}

TEST_CASE("restriction averages eight children") {
  const Box cb({0, 0, 0}, {1, 1, 1});
  Field f(refine(cb), 0, 0.25);
  for_each_cell(refine(cb), [&](int i, int j, int k) { f(i, j, k) = i + 2 * j + 4 * k; });
  Field c(cb, 0, 0.5);
  restrict_avg(f, c, cb);
  CHECK(c(0, 0, 0) == doctest::Approx((0 + 1) / 2.0 + 2 * 0.5 + 4 * 0.5));
  CHECK(c(1, 1, 1) == doctest::Approx(2.5 + 2 * 2.5 + 4 * 2.5));
}

TEST_CASE("restriction after prolongation is the identity on constants and linears") {
  const double H = 0.5;
  const Box cb({0, 0, 0}, {3, 3, 3});
  Field c(cb, 1, H, -1.25);
  Field f(refine(cb), 1, H / 2);
  prolong_trilinear(c, f, refine(cb), ProlongMode::set);
  Field back(cb, 1, H);
  restrict_avg(f, back, cb);
  for_each_cell(cb, [&](int i, int j, int k) { CHECK(back(i, j, k) == -1.25); });

  for_each_cell(c.storage(), [&](int i, int j, int k) { c(i, j, k) = 3.0 * i - j + 0.25 * k; });
  prolong_trilinear(c, f, refine(cb), ProlongMode::set);
  restrict_avg(f, back, cb);
  for_each_cell(cb, [&](int i, int j, int k) {
    CHECK(back(i, j, k) == doctest::Approx(c(i, j, k)).epsilon(1e-14));
  });
}

TEST_CASE("correction mode adds the interpolant") {
  const Box cb({0, 0, 0}, {1, 1, 1});
  Field c(cb, 1, 0.5, 1.0);
  Field f(refine(cb), 1, 0.25, 4.0);
  prolong_trilinear(c, f, refine(cb), ProlongMode::add_correction);
  for_each_cell(refine(cb), [&](int i, int j, int k) { CHECK(f(i, j, k) == 5.0); });
  CHECK(prolong_footprint(Box({2, 2, 2}, {5, 5, 5})) == Box({0, 0, 0}, {3, 3, 3}));
  CHECK(prolong_footprint(Box({3, 3, 3}, {3, 3, 3})) == Box({1, 1, 1}, {2, 2, 2}));
}

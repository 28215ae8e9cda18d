#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "srmg/grid.hpp"

using namespace srmg;

namespace {

std::set<std::array<int, 3>> cells_of(const Box& b) {
  std::set<std::array<int, 3>> s;
  for_each_cell(b, [&](int i, int j, int k) { s.insert({i, j, k}); });
  return s;
}

Box random_box(std::mt19937& rng) {
  std::uniform_int_distribution<int> lo(-3, 3), ext(0, 5);
  Int3 a{lo(rng), lo(rng), lo(rng)};
  Int3 b = a + Int3{ext(rng), ext(rng), ext(rng)};
  return Box(a, b);
}

}  // namespace

TEST_CASE("subtract matches a cell-set difference") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Box a = random_box(rng);
    const Box b = random_box(rng);
    const Region r = subtract(a, b);
    CHECK(r.boxes().size() <= 6);

    std::set<std::array<int, 3>> expected = cells_of(a);
    for (const auto& c : cells_of(b)) expected.erase(c);

    std::set<std::array<int, 3>> got;
    long long total = 0;
    for (const auto& piece : r.boxes()) {
      const auto s = cells_of(piece);
      total += static_cast<long long>(s.size());
      got.insert(s.begin(), s.end());
    }
    CHECK(total == static_cast<long long>(got.size()));  // disjoint pieces
    CHECK(got == expected);
    CHECK(r.volume() == static_cast<long long>(expected.size()));
  }
}

TEST_CASE("subtract of a region keeps pieces disjoint") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Box a = random_box(rng);
    const Region r = subtract(subtract(a, random_box(rng)), random_box(rng));
    long long total = 0;
    std::set<std::array<int, 3>> got;
    for (const auto& piece : r.boxes()) {
      const auto s = cells_of(piece);
      total += static_cast<long long>(s.size());
      got.insert(s.begin(), s.end());
    }
    CHECK(total == static_cast<long long>(got.size()));
  }
}

TEST_CASE("refine and coarsen are inverse on aligned boxes") {
  const Box b({1, 2, 0}, {3, 5, 4});
  CHECK(coarsen(refine(b)) == b);
  CHECK(refine(b).volume() == 8 * b.volume());
  CHECK_THROWS_AS(coarsen(Box({1, 0, 0}, {4, 1, 1})), AlignmentError);
  CHECK(coarsen_cover(Box({1, 0, 0}, {4, 1, 1})) == Box({0, 0, 0}, {2, 0, 0}));
}

TEST_CASE("grow and intersect") {
  const Box b({0, 0, 0}, {3, 1, 1});
  CHECK(grow(b, 1) == Box({-1, -1, -1}, {4, 2, 2}));
  CHECK(intersect(grow(b, 2), b) == b);
  CHECK(intersect(b, Box({5, 5, 5}, {6, 6, 6})).empty());
  CHECK(Box().volume() == 0);
}

TEST_CASE("field storage and bounds") {
  Field f(Box({0, 0, 0}, {3, 2, 1}), 1, 0.5);
  CHECK(f.storage() == Box({-1, -1, -1}, {4, 3, 2}));
  f(Int3{-1, -1, -1}) = 3.0;
  CHECK(f.at({-1, -1, -1}) == 3.0);
  CHECK_THROWS_AS(f.at({5, 0, 0}), ExtentError);
  CHECK(cell_center({0, 1, 2}, 0.5)[1] == doctest::Approx(0.75));
}

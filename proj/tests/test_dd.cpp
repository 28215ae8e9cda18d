#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "srmg/dd.hpp"

using namespace srmg;

namespace {

// Neighbours by brute force over all ranks: owned boxes touching grow(own, 1).
int brute_neighbors(const Level& lvl, int rank) {
  const Box halo = grow(lvl.owned[static_cast<std::size_t>(rank)], 1);
  int n = 0;
  for (int r : lvl.ranks)
    if (r != rank && !intersect(halo, lvl.owned[static_cast<std::size_t>(r)]).empty()) ++n;
  return n;
}

std::vector<Field> make_fields(const Level& lvl) {
  std::vector<Field> out;
  for (int r : lvl.ranks) out.emplace_back(lvl.owned[static_cast<std::size_t>(r)], 1, lvl.h);
  return out;
}

FieldSet ptrs(std::vector<Field>& v) {
  FieldSet s;
  for (auto& f : v) s.push_back(&f);
  return s;
}

double global_value(const Int3& c) { return 1.0 + c[0] + 100.0 * c[1] + 10000.0 * c[2]; }

}  // namespace

TEST_CASE("process grid numbering is x fastest") {
  ProcessGrid p{{4, 2, 2}};
  CHECK(p.size() == 16);
  CHECK(p.rank({1, 0, 0}) == 1);
  CHECK(p.rank({0, 1, 0}) == 4);
  CHECK(p.coord(13) == Int3{1, 1, 1});
  CHECK(!p.contains({4, 0, 0}));
}

TEST_CASE("hierarchy from the transition patch size") {
  const auto hier = LevelHierarchy::from_transition(ProcessGrid{{4, 2, 2}}, 4, 2);
  CHECK(hier.finest().domain.extents() == Int3{64, 32, 32});
  CHECK(hier.at_k(0).domain.extents() == Int3{16, 8, 8});
  CHECK(hier.level(0).domain.extents() == Int3{2, 1, 1});
  CHECK(hier.finest().k == 2);
  CHECK(hier.level(0).k == -hier.transition_index());
  CHECK(hier.at_k(0).owned[0].extents() == Int3{4, 4, 4});
  CHECK(hier.level(0).ranks.size() == 1);
  CHECK_THROWS_AS(LevelHierarchy::from_transition(ProcessGrid{{4, 2, 2}}, 3, 2), ConfigError);
  CHECK_THROWS_AS(LevelHierarchy::from_fine_grid(ProcessGrid{{3, 1, 1}}, 4, 0), ConfigError);
}

TEST_CASE("ownership tiles every level") {
  const auto hier = LevelHierarchy::from_fine_grid(ProcessGrid{{4, 2, 2}}, 5, 0);
  for (int idx = 0; idx < hier.num_levels(); ++idx) {
    const Level& lvl = hier.level(idx);
    long long total = 0;
    for (int r : lvl.ranks) total += lvl.owned[static_cast<std::size_t>(r)].volume();
    CHECK(total == lvl.domain.volume());
    for_each_cell(lvl.domain, [&](int i, int j, int k) {
      const int r = lvl.owner({i, j, k});
      REQUIRE(r >= 0);
      CHECK(lvl.owned[static_cast<std::size_t>(r)].contains(Int3{i, j, k}));
    });
    for (int d = 0; d < 3; ++d)
      CHECK(lvl.active[d] == std::max(1, std::min(hier.procs().dims[d], lvl.domain.extent(d) / 2)));
  }
}

TEST_CASE("ghost exchange copies owner values and counts neighbours") {
  const auto hier = LevelHierarchy::from_fine_grid(ProcessGrid{{4, 2, 2}}, 4, 0);
  const Level& lvl = hier.finest();
  auto fields = make_fields(lvl);
  for (std::size_t s = 0; s < fields.size(); ++s)
    for_each_cell(fields[s].box(), [&](int i, int j, int k) { fields[s](i, j, k) = global_value({i, j, k}); });
  CommLedger ledger;
  exchange_ghosts(lvl, ptrs(fields), &ledger);

  for (std::size_t s = 0; s < fields.size(); ++s)
    for_each_cell(fields[s].storage(), [&](int i, int j, int k) {
      if (lvl.domain.contains(Int3{i, j, k})) CHECK(fields[s](i, j, k) == global_value({i, j, k}));
    });

  CHECK(ledger.total(lvl.k, Direction::horizontal).phases == 1);
  const int r100 = hier.procs().rank({1, 0, 0});
  CHECK(brute_neighbors(lvl, r100) == 11);
  CHECK(ledger.rank_messages(lvl.k, r100) == 11);
  long long msgs = 0;
  for (int r : lvl.ranks) {
    CHECK(ledger.rank_messages(lvl.k, r) == brute_neighbors(lvl, r));
    msgs += brute_neighbors(lvl, r);
  }
  CHECK(ledger.total(lvl.k, Direction::horizontal).messages == msgs);
}

TEST_CASE("interior rank exchanges with 26 neighbours") {
  const auto hier = LevelHierarchy::from_fine_grid(ProcessGrid{{4, 4, 4}}, 5, 0);
  const Level& lvl = hier.finest();
  auto fields = make_fields(lvl);
  CommLedger ledger;
  exchange_ghosts(lvl, ptrs(fields), &ledger);
  const int r = hier.procs().rank({1, 1, 1});
  CHECK(ledger.rank_messages(lvl.k, r) == 26);
  CHECK(ledger.rank_messages(lvl.k, hier.procs().rank({0, 0, 0})) == 7);
}

TEST_CASE("restriction to owners averages and records one vertical phase") {
  const auto hier = LevelHierarchy::from_fine_grid(ProcessGrid{{4, 2, 2}}, 4, 0);
  const Level& fine = hier.finest();
  const Level& coarse = hier.level(hier.num_levels() - 2);
  auto ff = make_fields(fine);
  auto cf = make_fields(coarse);
  for (auto& f : ff) f.fill(2.0);
  FieldSet fs = ptrs(ff), cs = ptrs(cf);
  const RestrictPair pair{&fs, &cs};
  CommLedger ledger;
  restrict_to_owners(fine, coarse, std::span<const RestrictPair>(&pair, 1), &ledger);
  for (auto& c : cf) for_each_cell(c.box(), [&](int i, int j, int k) { CHECK(c(i, j, k) == 2.0); });
  CHECK(ledger.total(fine.k, Direction::vertical).phases == 1);
}

TEST_CASE("prolongation from owners matches a serial interpolation") {
  const auto hier = LevelHierarchy::from_fine_grid(ProcessGrid{{4, 2, 2}}, 4, 0);
  const Level& fine = hier.finest();
  const Level& coarse = hier.level(hier.num_levels() - 2);
  auto cf = make_fields(coarse);
  for (auto& c : cf) for_each_cell(c.box(), [&](int i, int j, int k) { c(i, j, k) = global_value({i, j, k}); });
  auto ff = make_fields(fine);
  CommLedger ledger;
  prolong_from_owners(coarse, ptrs(cf), fine, ptrs(ff), ProlongMode::set, &ledger, Direction::vertical);

  Field cser(coarse.domain, 1, coarse.h);
  for_each_cell(coarse.domain, [&](int i, int j, int k) { cser(i, j, k) = global_value({i, j, k}); });
  fill_bc_ghosts(cser, coarse.domain);
  Field fser(fine.domain, 1, fine.h);
  prolong_trilinear(cser, fser, fine.domain, ProlongMode::set);
  for (auto& f : ff) for_each_cell(f.box(), [&](int i, int j, int k) { CHECK(f(i, j, k) == fser(i, j, k)); });
  CHECK(ledger.total(fine.k, Direction::vertical).phases == 1);
}

TEST_CASE("ledger csv and reset") {
  CommLedger ledger;
  ledger.phase(1, Direction::vertical);
  ledger.message(1, Direction::vertical, 0, 1, 8);
  ledger.visit(1);
  CHECK(ledger.to_csv().rfind("level,direction,distance,phases,messages,cells\n", 0) == 0);
  CHECK(ledger.total(1, Direction::vertical).cells == 8);
  CHECK(ledger.visits(1) == 1);
  // k >= 1 traffic is classified far.
  CHECK(ledger.entries().begin()->first == CommLedger::Key{1, Direction::vertical, Distance::far});
  ledger.reset();
  CHECK(ledger.entries().empty());
  CHECK(ledger.visits(1) == 0);
}

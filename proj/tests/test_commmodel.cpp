#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "srmg/commmodel.hpp"
#include "srmg/sr.hpp"

using namespace srmg;

TEST_CASE("grid visit counts") {
  CHECK(grid_visits(4).approx == 10);
  CHECK(grid_visits(4).exact == 15);
  CHECK(grid_visits(3).exact == 10);
  CHECK(grid_visits(3).approx == 6);
  CHECK(grid_visits(0).exact == 1);
}

TEST_CASE("phase table golden") {
  const PhaseTable t = phase_table(9, 4);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0] == PhaseRow{"coarse grids", {3, 6, 2}, {1, 0, 0}});
  CHECK(t.rows[1] == PhaseRow{"conventional fine grids", {1, 6, 0}, {1, 6, 2}});
  CHECK(t.rows[2] == PhaseRow{"SR fine grids", {1, 6, 0}, {1, 0, 2}});
  CHECK(t.to_csv() ==
        "grids,near,far\n"
        "coarse grids,3(6c_H+2c_V),0\n"
        "conventional fine grids,6c_H,6c_H+2c_V\n"
        "SR fine grids,6c_H,2c_V\n");
  const auto j = nlohmann::json::parse(t.to_json());
  CHECK(j["rows"].size() == 3);
  CHECK(j["scale"] == "log2(N)^2/8");
  CHECK_THROWS(phase_table(3, 4));
}

TEST_CASE("bisection traffic") {
  CHECK(bisection(4, Method::sr) == 32.0);
  CHECK(bisection(1024, Method::conventional) == 1048576.0);
  CHECK(bisection(1024, Method::sr) == 1024000.0);
  const std::string csv = bisection_csv(4, 6);
  CHECK(csv.rfind("N,conventional,sr,ratio\n16,256,1024,0.25\n", 0) == 0);
}

TEST_CASE("active neighbour enumeration") {
  const auto hier = LevelHierarchy::from_fine_grid(ProcessGrid{{4, 2, 2}}, 4, 0);
  const ProcessGrid& p = hier.procs();
  CHECK(active_neighbors(hier.finest(), p, p.rank({1, 0, 0})) == 11);
  CHECK(active_neighbors(hier.finest(), p, p.rank({0, 0, 0})) == 7);
  CHECK(active_neighbors(hier.level(0), p, 0) == 0);
}

TEST_CASE("conventional ledger reconciles with the model") {
  const auto hier = LevelHierarchy::from_fine_grid(ProcessGrid{{4, 4, 4}}, 5, 0);
  CommLedger ledger;
  ConventionalSolver s(hier, CycleParams{}, &ledger);
  s.fmg();
  const ReconcileReport rep = reconcile(ledger, hier, CycleParams{}, Method::conventional);
  CHECK(rep.all_pass());
  const Level& fine = hier.finest();
  const long long per_visit = ledger.rank_messages(fine.k, hier.procs().rank({1, 1, 1})) / ledger.visits(fine.k);
  CHECK(per_visit == 26 * 6);
}

TEST_CASE("sr ledger reconciles and a tampered ledger does not") {
  SRConfig cfg;
  cfg.K = 2;
  cfg.pN0V = 2;
  const auto hier = sr_hierarchy(ProcessGrid{{4, 2, 2}}, cfg);
  CommLedger ledger;
  SRSolver s(hier, cfg, CycleParams{}, &ledger);
  s.solve();
  CHECK(reconcile(ledger, hier, CycleParams{}, Method::sr).all_pass());
  for (int k = 1; k <= cfg.K; ++k) CHECK(ledger.total(k, Direction::vertical).phases == 2 * ledger.visits(k));

  ledger.mutable_entry(1, Direction::horizontal, Distance::far).phases += 1;
  const ReconcileReport bad = reconcile(ledger, hier, CycleParams{}, Method::sr);
  CHECK(!bad.all_pass());
  CHECK(bad.to_csv().find("FAIL") != std::string::npos);
}

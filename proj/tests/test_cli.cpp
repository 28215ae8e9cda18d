#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "srmg/cli.hpp"

using namespace srmg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("srmg_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

RunConfig small(const std::string& out) {
  RunConfig cfg;
  cfg.procs.dims = {2, 1, 1};
  cfg.pN0V = 2;
  cfg.K = 2;
  cfg.out_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("config files and overrides") {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "run.cfg");
    os << "# comment\nsolver = conventional\nranks=2x2x1  # trailing\nA=6\ncolumns=4:4, 8:5\nsweep_B=0,2\n";
  }
  RunConfig cfg;
  apply_config(cfg, load_config_file((dir / "run.cfg").string()));
  CHECK(cfg.solver == SolverKind::conventional);
  CHECK(cfg.procs.dims == Int3{2, 2, 1});
  CHECK(cfg.A == 6);
  CHECK(cfg.columns == std::vector<std::pair<int, int>>{{4, 4}, {8, 5}});
  CHECK(cfg.sweep_B == std::vector<int>{0, 2});
  apply_config(cfg, {{"A", "2"}});
  CHECK(cfg.A == 2);
  CHECK(cfg.echo().find("P=2x2x1") != std::string::npos);

  CHECK_THROWS_AS(apply_config(cfg, {{"nonsense", "1"}}), ConfigError);
  CHECK_THROWS_AS(apply_config(cfg, {{"K", "four"}}), ConfigError);
  CHECK_THROWS_AS(parse_ranks("4x2"), ConfigError);
  CHECK_THROWS_AS(load_config_file((dir / "missing.cfg").string()), ConfigError);
}

TEST_CASE("solve exit codes") {
  std::ostringstream log, err;
  RunConfig bad = small(scratch("bad").string());
  bad.pN0V = 3;
  CHECK(run_guarded(cmd_solve, bad, log, err) == kConfigError);
  CHECK(err.str().find("pN0V") != std::string::npos);

  RunConfig conv = small(scratch("conv").string());
  conv.solver = SolverKind::conventional;
  conv.procs.dims = {1, 1, 1};
  conv.refinements = 4;
  conv.check = true;
  CHECK(run_guarded(cmd_solve, conv, log, err) == kOk);
  const auto summary = nlohmann::json::parse(slurp(fs::path(conv.out_dir) / "summary.json"));
  CHECK(summary["report"]["levels"].back()["N"] == "32x16x16");
  CHECK(summary["reconcile_pass"] == true);

  RunConfig failing = conv;
  failing.out_dir = scratch("fail").string();
  failing.solver = SolverKind::vcycle_iterative;
  failing.rtol = 1e-14;
  failing.max_cycles = 1;
  CHECK(run_guarded(cmd_solve, failing, log, err) == kSolveFailure);
}

TEST_CASE("csv outputs carry the configuration echo and are deterministic") {
  std::ostringstream log, err;
  RunConfig a = small(scratch("det_a").string());
  RunConfig b = small(scratch("det_b").string());
  a.check = b.check = true;
  REQUIRE(run_guarded(cmd_solve, a, log, err) == kOk);
  REQUIRE(run_guarded(cmd_solve, b, log, err) == kOk);
  for (const char* f : {"solve.csv", "ledger.csv", "reconcile.csv"}) {
    const std::string text = slurp(fs::path(a.out_dir) / f);
    CHECK(text.rfind("# solver=sr P=2x1x1 pN0V=2 K=2", 0) == 0);
    CHECK(text == slurp(fs::path(b.out_dir) / f));
  }
}

TEST_CASE("table sweep marks infeasible cells NA") {
  std::ostringstream log, err;
  RunConfig cfg = small(scratch("table").string());
  cfg.columns = {{2, 2}};
  cfg.sweep_A = {2, 8};
  cfg.sweep_B = {0};
  REQUIRE(run_guarded(cmd_sweep_table1, cfg, log, err) == kOk);
  const std::string layout = slurp(fs::path(cfg.out_dir) / "table1_layout.csv");
  CHECK(layout.find("A,B,1(2)\n") != std::string::npos);
  CHECK(layout.find("8,0,NA\n") != std::string::npos);
  const std::string rows = slurp(fs::path(cfg.out_dir) / "table1.csv");
  CHECK(rows.find("A,B,K,pN0V,schedule,fine,e_sr,e_conv,e_r,horiz_msgs_fine,vert_msgs_fine\n") !=
        std::string::npos);
  CHECK(rows.find("2,0,2,2,linear,16x8x8,") != std::string::npos);
}

TEST_CASE("comm command writes the model and passes reconciliation") {
  std::ostringstream log, err;
  RunConfig cfg = small(scratch("comm").string());
  cfg.check = true;
  CHECK(run_guarded(cmd_comm, cfg, log, err) == kOk);
  for (const char* f : {"phase_table.csv", "phase_table.json", "bisection.csv", "reconcile_sr.csv",
                        "reconcile_conventional.csv", "summary.json"})
    CHECK(fs::exists(fs::path(cfg.out_dir) / f));
}

TEST_CASE("convergence command reports refinement ratios") {
  std::ostringstream log, err;
  RunConfig cfg = small(scratch("conv_study").string());
  cfg.procs.dims = {1, 1, 1};
  cfg.sweep_refinements = {3, 4};
  REQUIRE(run_guarded(cmd_convergence, cfg, log, err) == kOk);
  const std::string text = slurp(fs::path(cfg.out_dir) / "convergence.csv");
  CHECK(text.find("N,h,error_fmg,residual_fmg,error_extra_vcycle,error_ratio,residual_ratio\n") !=
        std::string::npos);
  CHECK(text.find("32x16x16,") != std::string::npos);
}

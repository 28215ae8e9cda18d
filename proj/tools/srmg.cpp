// srmg: command-line driver for the conventional and segmental-refinement
// multigrid experiments.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "srmg/cli.hpp"

namespace {

// "--key=value" leftovers become configuration overrides.
srmg::KeyValues overrides_from(const std::vector<std::string>& extras) {
  srmg::KeyValues kv;
  for (const auto& e : extras) {
    if (e.rfind("--", 0) != 0 || e.find('=') == std::string::npos)
      throw srmg::ConfigError("unexpected argument '" + e + "' (overrides take the form --key=value)");
    const auto eq = e.find('=');
    kv[e.substr(2, eq - 2)] = e.substr(eq + 1);
  }
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segmental-refinement FAS multigrid experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string solver;
  std::string ranks;
  bool large = false;
  bool check = false;
  using srmg::Command;
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"solve", "one FMG solve with report, ledger and summary", srmg::cmd_solve},
      {"sweep-table1", "SR/conventional error ratio over the (A,B) grid", srmg::cmd_sweep_table1},
      {"sweep-pn0v", "error ratio as the transition patch size varies", srmg::cmd_sweep_pn0v},
      {"sweep-mbs", "error ratio under the maximum buffer schedule", srmg::cmd_sweep_mbs},
      {"comm", "phase table, bisection traffic and ledger reconciliation", srmg::cmd_comm},
      {"convergence", "conventional FMG accuracy under refinement", srmg::cmd_convergence},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->allow_extras();
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--solver", solver, "conventional | sr | vcycle-iterative");
    sub->add_option("--ranks", ranks, "process grid P1xP2xP3");
    sub->add_flag("--large", large, "include the larger table columns");
    sub->add_flag("--check", check, "reconcile the ledger and exit 3 on mismatch");
    subs.emplace_back(sub, fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? srmg::kOk : srmg::kConfigError;
  }

  try {
    srmg::RunConfig cfg;
    if (!config_path.empty()) srmg::apply_config(cfg, srmg::load_config_file(config_path));
    std::vector<std::string> extras = app.remaining();
    for (const auto& [sub, fn] : subs)
      if (sub->parsed()) extras = sub->remaining();
    srmg::KeyValues cli = overrides_from(extras);
    if (!solver.empty()) cli["solver"] = solver;
    if (!ranks.empty()) cli["ranks"] = ranks;
    if (!out_dir.empty()) cli["out"] = out_dir;
    if (large) cli["large"] = "true";
    if (check) cli["check"] = "true";
    srmg::apply_config(cfg, cli);
    if (cfg.large)
      std::cerr << "warning: --large columns need several GB of memory and take minutes\n";

    for (const auto& [sub, fn] : subs)
      if (sub->parsed()) return srmg::run_guarded(fn, cfg, std::cout, std::cerr);
  } catch (const srmg::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return srmg::kConfigError;
  }
  return srmg::kConfigError;
}

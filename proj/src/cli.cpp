#include "srmg/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "srmg/commmodel.hpp"

namespace srmg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& s : split(v, ',')) out.push_back(parse_int(key, s));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

const char* to_string(SolverKind s) {
  switch (s) {
    case SolverKind::conventional: return "conventional";
    case SolverKind::sr: return "sr";
    case SolverKind::vcycle_iterative: return "vcycle-iterative";
  }
  return "?";
}

const char* to_string(ScheduleKind s) { return s == ScheduleKind::mbs ? "mbs" : "linear"; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << v;
  return os.str();
}

std::string fixed3(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << v;
  return os.str();
}

std::filesystem::path prepare_out(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + p.string());
  os << text;
}

// CSV with the configuration echo as a comment line.
void write_csv(const std::filesystem::path& p, const RunConfig& cfg, const std::string& body) {
  write_file(p, "# " + cfg.echo() + "\n" + body);
}

nlohmann::json report_json(const SolveReport& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"k", l.k}, {"N", srmg::to_string(l.cells)}, {"error_inf", l.error_inf},
                      {"residual_inf", l.residual_inf}});
  return {{"levels", levels}, {"phases", r.phases}, {"messages", r.messages}};
}

LevelHierarchy conventional_hierarchy(const RunConfig& cfg) {
  if (cfg.refinements >= 0) return LevelHierarchy::from_fine_grid(cfg.procs, cfg.refinements, 0);
  return sr_hierarchy(cfg.procs, cfg.sr_config());
}

CommCounters sum_fine(const CommLedger& ledger, Direction dir) {
  CommCounters t;
  for (const auto& [key, c] : ledger.entries()) {
    if (std::get<0>(key) < 1 || std::get<1>(key) != dir) continue;
    t.phases += c.phases;
    t.messages += c.messages;
    t.cells += c.cells;
  }
  return t;
}

}  // namespace

SRConfig RunConfig::sr_config() const {
  SRConfig c;
  c.K = K;
  c.schedule = schedule;
  c.A = A;
  c.B = B;
  c.J1 = J1;
  c.pN0V = pN0V;
  c.max_reach = max_reach;
  return c;
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  os << "solver=" << to_string(solver) << " P=" << srmg::to_string(procs.dims) << " pN0V=" << pN0V
     << " K=" << K << " schedule=" << to_string(schedule) << " A=" << A << " B=" << B
     << " J1=" << J1 << " max_reach=" << max_reach << " alpha=" << cycle.alpha
     << " nu1=" << cycle.nu1 << " nu2=" << cycle.nu2 << " n_vcycles=" << cycle.n_vcycles;
  if (refinements >= 0) os << " refinements=" << refinements;
  return os.str();
}

Int3 parse_ranks(const std::string& s) {
  const auto parts = split(s, 'x');
  if (parts.size() != 3) throw ConfigError("ranks: expected P1xP2xP3, got '" + s + "'");
  Int3 p;
  for (int d = 0; d < 3; ++d) {
    p[d] = parse_int("ranks", parts[static_cast<std::size_t>(d)]);
    if (p[d] < 1) throw ConfigError("ranks: counts must be positive");
  }
  return p;
}

KeyValues load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(RunConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, v] : kv) {
    if (key == "solver") {
      if (v == "conventional") cfg.solver = SolverKind::conventional;
      else if (v == "sr") cfg.solver = SolverKind::sr;
      else if (v == "vcycle-iterative") cfg.solver = SolverKind::vcycle_iterative;
      else throw ConfigError("solver: expected conventional, sr or vcycle-iterative");
    } else if (key == "ranks" || key == "P") {
      cfg.procs.dims = parse_ranks(v);
    } else if (key == "pN0V") {
      cfg.pN0V = parse_int(key, v);
    } else if (key == "K") {
      cfg.K = parse_int(key, v);
    } else if (key == "refinements") {
      cfg.refinements = parse_int(key, v);
    } else if (key == "schedule") {
      if (v == "linear") cfg.schedule = ScheduleKind::linear;
      else if (v == "mbs") cfg.schedule = ScheduleKind::mbs;
      else throw ConfigError("schedule: expected linear or mbs");
    } else if (key == "A") {
      cfg.A = parse_int(key, v);
    } else if (key == "B") {
      cfg.B = parse_int(key, v);
    } else if (key == "J1") {
      cfg.J1 = parse_int(key, v);
    } else if (key == "max_reach") {
      cfg.max_reach = parse_int(key, v);
    } else if (key == "alpha") {
      cfg.cycle.alpha = parse_int(key, v);
    } else if (key == "nu1") {
      cfg.cycle.nu1 = parse_int(key, v);
    } else if (key == "nu2") {
      cfg.cycle.nu2 = parse_int(key, v);
    } else if (key == "n_vcycles") {
      cfg.cycle.n_vcycles = parse_int(key, v);
    } else if (key == "cheb_lo") {
      cfg.cycle.cheb_lo = parse_double(key, v);
    } else if (key == "cheb_hi") {
      cfg.cycle.cheb_hi = parse_double(key, v);
    } else if (key == "rtol") {
      cfg.rtol = parse_double(key, v);
    } else if (key == "max_cycles") {
      cfg.max_cycles = parse_int(key, v);
    } else if (key == "sweep_A") {
      cfg.sweep_A = parse_int_list(key, v);
    } else if (key == "sweep_B") {
      cfg.sweep_B = parse_int_list(key, v);
    } else if (key == "sweep_pN0V") {
      cfg.sweep_pN0V = parse_int_list(key, v);
    } else if (key == "sweep_refinements") {
      cfg.sweep_refinements = parse_int_list(key, v);
    } else if (key == "columns") {
      cfg.columns.clear();
      for (const auto& c : split(v, ',')) {
        const auto pk = split(c, ':');
        if (pk.size() != 2) throw ConfigError("columns: expected pN0V:K pairs, got '" + c + "'");
        cfg.columns.emplace_back(parse_int(key, pk[0]), parse_int(key, pk[1]));
      }
    } else if (key == "out") {
      cfg.out_dir = v;
    } else if (key == "large") {
      cfg.large = parse_bool(key, v);
    } else if (key == "check") {
      cfg.check = parse_bool(key, v);
    } else {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  if (cfg.cycle.alpha < 0 || cfg.cycle.nu1 < 0 || cfg.cycle.nu2 < 0 || cfg.cycle.n_vcycles < 1)
    throw ConfigError("cycle parameters must be non-negative (n_vcycles >= 1)");
}

Comparison compare_sr(const ProcessGrid& procs, const SRConfig& cfg, const CycleParams& params) {
  const LevelHierarchy hier = sr_hierarchy(procs, cfg);
  Comparison c;
  {
    ConventionalSolver conv(hier, params);
    c.conv = conv.fmg();
  }
  CommLedger ledger;
  SRSolver sr(hier, cfg, params, &ledger);
  c.sr = sr.solve();
  c.sr_horizontal_fine = sum_fine(ledger, Direction::horizontal);
  c.sr_vertical_fine = sum_fine(ledger, Direction::vertical);
  return c;
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  CommLedger ledger;
  SolveReport report;
  std::optional<ReconcileReport> rec;
  int cycles = -1;
  if (cfg.solver == SolverKind::sr) {
    const SRConfig sc = cfg.sr_config();
    const LevelHierarchy hier = sr_hierarchy(cfg.procs, sc);
    SRSolver solver(hier, sc, cfg.cycle, &ledger);
    report = solver.solve();
    rec = reconcile(ledger, hier, cfg.cycle, Method::sr);
  } else {
    const LevelHierarchy hier = conventional_hierarchy(cfg);
    ConventionalSolver solver(hier, cfg.cycle, &ledger);
    report = solver.fmg();
    rec = reconcile(ledger, hier, cfg.cycle, Method::conventional);
    if (cfg.solver == SolverKind::vcycle_iterative) {
      cycles = solver.iterate(cfg.rtol, cfg.max_cycles);
      report.levels.back() = solver.measure(hier.num_levels() - 1);
    }
  }
  const auto& fine = report.finest();
  log << "fine grid " << to_string(fine.cells) << "  error_inf " << fmt(fine.error_inf)
      << "  residual_inf " << fmt(fine.residual_inf) << "  (" << fixed3(report.wall_seconds)
      << " s)\n";
  if (cycles >= 0) log << "extra V-cycles to rtol " << cfg.rtol << ": " << cycles << "\n";

  const auto dir = prepare_out(cfg);
  write_csv(dir / "solve.csv", cfg, report.to_csv());
  write_csv(dir / "ledger.csv", cfg, ledger.to_csv());
  write_csv(dir / "reconcile.csv", cfg, rec->to_csv());
  nlohmann::json j{{"command", "solve"}, {"config", cfg.echo()}, {"report", report_json(report)},
                   {"reconcile_pass", rec->all_pass()}};
  if (cycles >= 0) j["extra_vcycles"] = cycles;
  write_file(dir / "summary.json", j.dump(2) + "\n");

  if (cfg.check && !rec->all_pass()) {
    log << "communication reconciliation failed:\n" << rec->to_csv();
    return kCheckFailure;
  }
  return kOk;
}

int cmd_sweep_table1(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out(cfg);
  std::vector<std::pair<int, int>> columns = cfg.columns;
  if (cfg.large) {
    for (const auto& c : std::vector<std::pair<int, int>>{{8, 5}, {16, 6}})
      if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
  }

  std::ostringstream rows;
  rows << "A,B,K,pN0V,schedule,fine,e_sr,e_conv,e_r,horiz_msgs_fine,vert_msgs_fine\n";
  // layout[A][B][column] = e_r text
  std::map<int, std::map<int, std::map<std::size_t, std::string>>> layout;
  nlohmann::json cells = nlohmann::json::array();

  for (std::size_t ci = 0; ci < columns.size(); ++ci) {
    const auto [pn, K] = columns[ci];
    SRConfig base = cfg.sr_config();
    base.schedule = ScheduleKind::linear;
    base.pN0V = pn;
    base.K = K;
    const LevelHierarchy hier = sr_hierarchy(cfg.procs, base);
    SolveReport conv;
    {
      ConventionalSolver solver(hier, cfg.cycle);
      conv = solver.fmg();
    }
    log << "column pN0V=" << pn << " K=" << K << ": fine " << to_string(conv.finest().cells)
        << ", e_conv " << fmt(conv.finest().error_inf) << "\n";
    for (int A : cfg.sweep_A) {
      for (int B : cfg.sweep_B) {
        SRConfig sc = base;
        sc.A = A;
        sc.B = B;
        rows << A << ',' << B << ',' << K << ',' << pn << ",linear," << to_string(conv.finest().cells) << ',';
        try {
          CommLedger ledger;
          SRSolver solver(hier, sc, cfg.cycle, &ledger);
          const SolveReport sr = solver.solve();
          const double er = error_ratio(sr, conv);
          const CommCounters h = sum_fine(ledger, Direction::horizontal);
          const CommCounters v = sum_fine(ledger, Direction::vertical);
          rows << fmt(sr.finest().error_inf) << ',' << fmt(conv.finest().error_inf) << ','
               << fixed3(er) << ',' << h.messages << ',' << v.messages << '\n';
          layout[A][B][ci] = fixed3(er);
          cells.push_back({{"A", A}, {"B", B}, {"pN0V", pn}, {"K", K}, {"e_r", er}});
          log << "  A=" << A << " B=" << B << "  e_r " << fixed3(er) << "\n";
        } catch (const InfeasibleConfig& e) {
          rows << "NA," << fmt(conv.finest().error_inf) << ",NA,NA,NA\n";
          layout[A][B][ci] = "NA";
          cells.push_back({{"A", A}, {"B", B}, {"pN0V", pn}, {"K", K}, {"e_r", "NA"}, {"reason", e.what()}});
          log << "  A=" << A << " B=" << B << "  NA (" << e.what() << ")\n";
        }
      }
    }
  }

  std::ostringstream lay;
  lay << "A,B";
  for (const auto& [pn, K] : columns)
    lay << ',' << static_cast<int>(std::lround(std::log2(pn))) << '(' << K << ')';
  lay << '\n';
  for (int A : cfg.sweep_A)
    for (int B : cfg.sweep_B) {
      lay << A << ',' << B;
      for (std::size_t ci = 0; ci < columns.size(); ++ci) lay << ',' << layout[A][B][ci];
      lay << '\n';
    }

  write_csv(dir / "table1.csv", cfg, rows.str());
  write_csv(dir / "table1_layout.csv", cfg, lay.str());
  write_file(dir / "summary.json",
             nlohmann::json{{"command", "sweep-table1"}, {"config", cfg.echo()}, {"cells", cells}}.dump(2) + "\n");
  return kOk;
}

namespace {

int sweep_pn0v_impl(const RunConfig& cfg, std::ostream& log, ScheduleKind schedule,
                    const std::string& name) {
  const auto dir = prepare_out(cfg);
  std::ostringstream rows;
  rows << "pN0V,log2_pN0V,K,schedule,N_K,fine,e_sr,e_conv,e_r,horiz_msgs_fine,vert_msgs_fine\n";
  nlohmann::json runs = nlohmann::json::array();
  for (int pn : cfg.sweep_pN0V) {
    SRConfig sc = cfg.sr_config();
    sc.schedule = schedule;
    sc.pN0V = pn;
    if (schedule == ScheduleKind::mbs) sc.max_reach = 0;
    const Comparison c = compare_sr(cfg.procs, sc, cfg.cycle);
    const int log2pn = static_cast<int>(std::lround(std::log2(pn)));
    rows << pn << ',' << log2pn << ',' << sc.K << ',' << to_string(schedule) << ','
         << (pn << sc.K) << ',' << to_string(c.sr.finest().cells) << ','
         << fmt(c.sr.finest().error_inf) << ',' << fmt(c.conv.finest().error_inf) << ','
         << fixed3(c.e_r()) << ',' << c.sr_horizontal_fine.messages << ','
         << c.sr_vertical_fine.messages << '\n';
    runs.push_back({{"pN0V", pn}, {"K", sc.K}, {"e_r", c.e_r()}, {"e_sr", c.sr.finest().error_inf},
                    {"e_conv", c.conv.finest().error_inf}});
    log << "pN0V=" << pn << " fine " << to_string(c.sr.finest().cells) << "  e_r "
        << fixed3(c.e_r()) << "\n";
  }
  write_csv(dir / (name + ".csv"), cfg, rows.str());
  write_file(dir / "summary.json",
             nlohmann::json{{"command", name}, {"config", cfg.echo()}, {"runs", runs}}.dump(2) + "\n");
  return kOk;
}

}  // namespace

int cmd_sweep_pn0v(const RunConfig& cfg, std::ostream& log) {
  return sweep_pn0v_impl(cfg, log, cfg.schedule, "sweep_pn0v");
}

int cmd_sweep_mbs(const RunConfig& cfg, std::ostream& log) {
  return sweep_pn0v_impl(cfg, log, ScheduleKind::mbs, "sweep_mbs");
}

int cmd_comm(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out(cfg);
  const SRConfig sc = cfg.sr_config();
  const LevelHierarchy hier = sr_hierarchy(cfg.procs, sc);
  const int M = hier.num_levels() - 1;

  const PhaseTable table = phase_table(M, sc.K);
  write_csv(dir / "phase_table.csv", cfg, table.to_csv());
  write_file(dir / "phase_table.json", table.to_json() + "\n");
  write_csv(dir / "bisection.csv", cfg, bisection_csv());

  CommLedger conv_ledger;
  {
    ConventionalSolver solver(hier, cfg.cycle, &conv_ledger);
    solver.fmg();
  }
  CommLedger sr_ledger;
  {
    SRSolver solver(hier, sc, cfg.cycle, &sr_ledger);
    solver.solve();
  }
  const ReconcileReport rc = reconcile(conv_ledger, hier, cfg.cycle, Method::conventional);
  const ReconcileReport rs = reconcile(sr_ledger, hier, cfg.cycle, Method::sr);
  write_csv(dir / "ledger_conventional.csv", cfg, conv_ledger.to_csv());
  write_csv(dir / "ledger_sr.csv", cfg, sr_ledger.to_csv());
  write_csv(dir / "reconcile_conventional.csv", cfg, rc.to_csv());
  write_csv(dir / "reconcile_sr.csv", cfg, rs.to_csv());

  const VisitCount v = grid_visits(M);
  std::ostringstream visits;
  visits << "M,exact,approx\n" << M << ',' << v.exact << ',' << v.approx << '\n';
  write_csv(dir / "grid_visits.csv", cfg, visits.str());

  write_file(dir / "summary.json",
             nlohmann::json{{"command", "comm"},
                            {"config", cfg.echo()},
                            {"M", M},
                            {"grid_visits_exact", v.exact},
                            {"grid_visits_approx", v.approx},
                            {"reconcile_conventional_pass", rc.all_pass()},
                            {"reconcile_sr_pass", rs.all_pass()}}
                     .dump(2) +
                 "\n");
  log << table.to_csv() << "reconcile conventional: " << (rc.all_pass() ? "pass" : "FAIL")
      << "\nreconcile sr: " << (rs.all_pass() ? "pass" : "FAIL") << "\n";
  if (cfg.check && !(rc.all_pass() && rs.all_pass())) return kCheckFailure;
  return kOk;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out(cfg);
  std::ostringstream rows;
  rows << "N,h,error_fmg,residual_fmg,error_extra_vcycle,error_ratio,residual_ratio\n";
  nlohmann::json runs = nlohmann::json::array();
  double prev_e = 0.0;
  double prev_r = 0.0;
  for (int ref : cfg.sweep_refinements) {
    const LevelHierarchy hier = LevelHierarchy::from_fine_grid(cfg.procs, ref, 0);
    ConventionalSolver solver(hier, cfg.cycle);
    const SolveReport rep = solver.fmg();
    const LevelReport fine = rep.finest();
    solver.vcycle(hier.num_levels() - 1, &Patch::f);
    const LevelReport extra = solver.measure(hier.num_levels() - 1);
    rows << to_string(fine.cells) << ',' << fmt(fine.h) << ',' << fmt(fine.error_inf) << ','
         << fmt(fine.residual_inf) << ',' << fmt(extra.error_inf) << ',';
    if (prev_e > 0.0) {
      rows << fixed3(prev_e / fine.error_inf) << ',' << fixed3(prev_r / fine.residual_inf) << '\n';
    } else {
      rows << "NA,NA\n";
    }
    runs.push_back({{"N", to_string(fine.cells)}, {"error_fmg", fine.error_inf},
                    {"residual_fmg", fine.residual_inf}, {"error_extra_vcycle", extra.error_inf}});
    log << to_string(fine.cells) << "  error " << fmt(fine.error_inf) << "  residual "
        << fmt(fine.residual_inf) << "\n";
    prev_e = fine.error_inf;
    prev_r = fine.residual_inf;
  }
  write_csv(dir / "convergence.csv", cfg, rows.str());
  write_file(dir / "summary.json",
             nlohmann::json{{"command", "convergence"}, {"config", cfg.echo()}, {"runs", runs}}.dump(2) + "\n");
  return kOk;
}

int run_guarded(Command cmd, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    return cmd(cfg, log);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const AlignmentError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "solve failed: " << e.what() << "\n";
    return kSolveFailure;
  }
}

}  // namespace srmg

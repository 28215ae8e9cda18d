#include "srmg/commmodel.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace srmg {

VisitCount grid_visits(int M) {
  if (M < 0) throw std::invalid_argument("grid_visits: M must be non-negative");
  const long long m = M;
  return {(m + 1) * (m + 2) / 2, (m + 1) * m / 2};
}

std::string PhaseExpr::to_string() const {
  std::ostringstream os;
  const bool wrap = factor != 1 && h != 0 && v != 0;
  if (factor != 1) os << factor;
  if (wrap) os << '(';
  if (h != 0) os << h << "c_H";
  if (h != 0 && v != 0) os << '+';
  if (v != 0) os << v << "c_V";
  if (h == 0 && v == 0) os << '0';
  if (wrap) os << ')';
  return os.str();
}

PhaseTable phase_table(int M, int K) {
  if (K < 0 || K > M) throw std::invalid_argument("phase_table: need 0 <= K <= M");
  PhaseTable t;
  t.M = M;
  t.K = K;
  t.rows = {
      {"coarse grids", {3, 6, 2}, {1, 0, 0}},
      {"conventional fine grids", {1, 6, 0}, {1, 6, 2}},
      {"SR fine grids", {1, 6, 0}, {1, 0, 2}},
  };
  return t;
}

std::string PhaseTable::to_csv() const {
  std::ostringstream os;
  os << "grids,near,far\n";
  for (const auto& r : rows) os << r.grids << ',' << r.near.to_string() << ',' << r.far.to_string() << '\n';
  return os.str();
}

std::string PhaseTable::to_json() const {
  nlohmann::json j;
  j["M"] = M;
  j["K"] = K;
  j["scale"] = scale;
  for (const auto& r : rows) {
    auto expr = [](const PhaseExpr& e) {
      return nlohmann::json{{"factor", e.factor}, {"c_H", e.h}, {"c_V", e.v}, {"text", e.to_string()}};
    };
    j["rows"].push_back({{"grids", r.grids}, {"near", expr(r.near)}, {"far", expr(r.far)}});
  }
  return j.dump(2);
}

double bisection(double N, Method m) {
  if (N < 2) throw std::invalid_argument("bisection: N must be at least 2");
  if (m == Method::conventional) return N * N;
  const double l = std::log2(N);
  return N * l * l * l;
}

std::string bisection_csv(int lo_exp, int hi_exp) {
  std::ostringstream os;
  os.precision(10);
  os << "N,conventional,sr,ratio\n";
  for (int e = lo_exp; e <= hi_exp; ++e) {
    const double N = std::ldexp(1.0, e);
    const double c = bisection(N, Method::conventional);
    const double s = bisection(N, Method::sr);
    os << static_cast<long long>(N) << ',' << c << ',' << s << ',' << c / s << '\n';
  }
  return os.str();
}

int active_neighbors(const Level& level, const ProcessGrid& procs, int rank) {
  const Int3 pc = procs.coord(rank);
  Int3 a;
  for (int d = 0; d < 3; ++d) a[d] = pc[d] / (procs.dims[d] / level.active[d]);
  int count = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const Int3 b = a + Int3{dx, dy, dz};
        bool inside = true;
        for (int d = 0; d < 3; ++d) inside = inside && b[d] >= 0 && b[d] < level.active[d];
        if (inside) ++count;
      }
  return count;
}

bool ReconcileReport::all_pass() const {
  for (const auto& f : facts)
    if (!f.pass()) return false;
  return true;
}

std::string ReconcileReport::to_csv() const {
  std::ostringstream os;
  os << "fact,expected,observed,status\n";
  for (const auto& f : facts)
    os << f.name << ',' << f.expected << ',' << f.observed << ',' << (f.pass() ? "pass" : "FAIL") << '\n';
  return os.str();
}

ReconcileReport reconcile(const CommLedger& ledger, const LevelHierarchy& hier,
                          const CycleParams& params, Method method) {
  ReconcileReport rep;
  const int top = hier.num_levels() - 1;
  const int first_sr = method == Method::sr ? hier.transition_index() + 1 : hier.num_levels();
  const long long n = params.n_vcycles;
  long long total_visits = 0;
  long long total_expected = 0;

  for (int idx = 0; idx <= top; ++idx) {
    const Level& lvl = hier.level(idx);
    const std::string tag = "k=" + std::to_string(lvl.k) + " ";
    const long long visits = ledger.visits(lvl.k);
    // Each FMG stage s >= idx runs n V-cycles through level idx; stage 0 is
    // the direct coarse solve alone.
    const long long expected_visits = idx == 0 ? n * top + 1 : n * (top - idx + 1);
    total_visits += visits;
    total_expected += expected_visits;
    rep.facts.push_back({tag + "level visits", expected_visits, visits});
    if (idx == 0) continue;

    const CommCounters vert = ledger.total(lvl.k, Direction::vertical);
    rep.facts.push_back({tag + "vertical phases (2 per visit)", 2 * visits, vert.phases});

    const CommCounters hor = ledger.total(lvl.k, Direction::horizontal);
    if (idx >= first_sr) {
      rep.facts.push_back({tag + "horizontal phases on SR level", 0, hor.phases});
      rep.facts.push_back({tag + "horizontal messages on SR level", 0, hor.messages});
      continue;
    }
    // Every visit smooths nu1 + nu2 times and exchanges once before the
    // residual; visits entered from a finer level also exchange the restricted
    // solution, the first visit of each FMG stage instead smooths alpha times.
    const long long expected = visits * (params.nu1 + params.nu2 + 1) + (visits - n) + params.alpha;
    rep.facts.push_back({tag + "horizontal phases per visit model", expected, hor.phases});
    for (int r : lvl.ranks) {
      const long long nbrs = active_neighbors(lvl, hier.procs(), r);
      rep.facts.push_back({tag + "rank " + std::to_string(r) + " horizontal messages received (" +
                               std::to_string(nbrs) + " neighbors)",
                           nbrs * hor.phases, ledger.rank_messages(lvl.k, r)});
    }
  }
  if (n == 1) {
    rep.facts.push_back({"total level visits (triangular count)", grid_visits(top).exact, total_visits});
  } else {
    rep.facts.push_back({"total level visits", total_expected, total_visits});
  }
  return rep;
}

}  // namespace srmg

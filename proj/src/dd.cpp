#include "srmg/dd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace srmg {

namespace {

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
  int m = 0;
  while ((1 << m) < n) ++m;
  return m;
}

}  // namespace

Int3 ProcessGrid::coord(int rank) const {
  return {rank % dims[0], (rank / dims[0]) % dims[1], rank / (dims[0] * dims[1])};
}

int ProcessGrid::rank(const Int3& c) const { return c[0] + dims[0] * (c[1] + dims[1] * c[2]); }

bool ProcessGrid::contains(const Int3& c) const {
  for (int d = 0; d < 3; ++d)
    if (c[d] < 0 || c[d] >= dims[d]) return false;
  return true;
}

int Level::owner(const Int3& cell) const {
  if (!domain.contains(cell)) return -1;
  for (int r : ranks)
    if (owned[static_cast<std::size_t>(r)].contains(cell)) return r;
  return -1;
}

int Level::slot(int rank) const {
  const auto it = std::lower_bound(ranks.begin(), ranks.end(), rank);
  return (it != ranks.end() && *it == rank) ? static_cast<int>(it - ranks.begin()) : -1;
}

std::vector<int> Level::owners_of(const Box& b) const {
  std::vector<int> out;
  for (int r : ranks)
    if (!intersect(owned[static_cast<std::size_t>(r)], b).empty()) out.push_back(r);
  return out;
}

LevelHierarchy LevelHierarchy::from_fine_grid(const ProcessGrid& procs, int refinements,
                                              int sr_levels, const ProblemSpec& spec) {
  for (int d = 0; d < 3; ++d)
    if (!is_pow2(procs.dims[d]))
      throw ConfigError("process grid " + to_string(procs.dims) + " must be powers of two");
  if (refinements < 0) throw ConfigError("negative refinement count");
  if (sr_levels < 0 || sr_levels > refinements)
    throw ConfigError("SR level count must lie in [0, refinements]");

  const double h0 = *std::min_element(spec.extent.begin(), spec.extent.end());
  LevelHierarchy hier;
  hier.procs_ = procs;
  hier.spec_ = spec;
  hier.sr_levels_ = sr_levels;
  for (int idx = 0; idx <= refinements; ++idx) {
    Level lvl;
    lvl.index = idx;
    lvl.k = idx - (refinements - sr_levels);
    lvl.h = std::ldexp(h0, -idx);
    lvl.domain = spec.domain_box(lvl.h);
    const Int3 n = lvl.domain.extents();
    Int3 per;
    for (int d = 0; d < 3; ++d) {
      lvl.active[d] = std::max(1, std::min(procs.dims[d], n[d] / 2));
      if (n[d] % lvl.active[d] != 0)
        throw ConfigError("level " + std::to_string(idx) + " extent " + to_string(n) +
                          " does not divide over " + to_string(lvl.active) + " ranks");
      per[d] = n[d] / lvl.active[d];
    }
    lvl.owned.assign(static_cast<std::size_t>(procs.size()), Box{});
    for (int az = 0; az < lvl.active[2]; ++az)
      for (int ay = 0; ay < lvl.active[1]; ++ay)
        for (int ax = 0; ax < lvl.active[0]; ++ax) {
          const Int3 a{ax, ay, az};
          Int3 pc;
          for (int d = 0; d < 3; ++d) pc[d] = a[d] * (procs.dims[d] / lvl.active[d]);
          const int r = procs.rank(pc);
          const Int3 lo{a[0] * per[0], a[1] * per[1], a[2] * per[2]};
          lvl.owned[static_cast<std::size_t>(r)] = Box(lo, lo + per - Int3{1, 1, 1});
          lvl.ranks.push_back(r);
        }
    std::sort(lvl.ranks.begin(), lvl.ranks.end());
    hier.levels_.push_back(std::move(lvl));
  }
  return hier;
}

LevelHierarchy LevelHierarchy::from_transition(const ProcessGrid& procs, int pN0V, int sr_levels,
                                               const ProblemSpec& spec) {
  if (!is_pow2(pN0V) || pN0V < 2)
    throw ConfigError("pN0V=" + std::to_string(pN0V) + " must be a power of two >= 2");
  const double h0 = *std::min_element(spec.extent.begin(), spec.extent.end());
  const Box coarsest = spec.domain_box(h0);
  const Int3 transition = procs.dims * pN0V;
  int m = -1;
  for (int d = 0; d < 3; ++d) {
    const int c = coarsest.extent(d);
    if (transition[d] % c != 0 || !is_pow2(transition[d] / c))
      throw ConfigError("transition grid " + to_string(transition) +
                        " is not a power-of-two refinement of the coarsest grid " +
                        to_string(coarsest.extents()));
    const int md = log2_exact(transition[d] / c);
    if (m >= 0 && md != m)
      throw ConfigError("transition grid " + to_string(transition) +
                        " does not have the domain's aspect ratio; adjust the process grid");
    m = md;
  }
  LevelHierarchy hier = from_fine_grid(procs, m + sr_levels, sr_levels, spec);
  const Level& t = hier.level(hier.transition_index());
  if (static_cast<int>(t.ranks.size()) != procs.size())
    throw ConfigError("transition level does not use every rank");
  return hier;
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::horizontal: return "horizontal";
    case Direction::vertical: return "vertical";
    case Direction::fmg: return "fmg";
  }
  return "?";
}

const char* to_string(Distance d) { return d == Distance::near ? "near" : "far"; }

void CommLedger::phase(int k, Direction dir) {
  ++entries_[{k, dir, partition_.phase_class(k)}].phases;
}

void CommLedger::message(int k, Direction dir, int from, int to, long long cells) {
  auto& c = entries_[{k, dir, partition_.classify(from, to, k)}];
  ++c.messages;
  c.cells += cells;
  cells_sent_ += cells;
  cells_received_ += cells;
  if (dir == Direction::horizontal) ++rank_messages_[{k, to}];
}

void CommLedger::reset() {
  entries_.clear();
  visits_.clear();
  rank_messages_.clear();
  cells_sent_ = 0;
  cells_received_ = 0;
}

CommCounters CommLedger::total(int k, Direction dir) const {
  CommCounters t;
  for (const auto& [key, c] : entries_) {
    if (std::get<0>(key) != k || std::get<1>(key) != dir) continue;
    t.phases += c.phases;
    t.messages += c.messages;
    t.cells += c.cells;
  }
  return t;
}

CommCounters CommLedger::total(Direction dir) const {
  CommCounters t;
  for (const auto& [key, c] : entries_) {
    if (std::get<1>(key) != dir) continue;
    t.phases += c.phases;
    t.messages += c.messages;
    t.cells += c.cells;
  }
  return t;
}

long long CommLedger::visits(int k) const {
  const auto it = visits_.find(k);
  return it == visits_.end() ? 0 : it->second;
}

long long CommLedger::rank_messages(int k, int rank) const {
  const auto it = rank_messages_.find({k, rank});
  return it == rank_messages_.end() ? 0 : it->second;
}

std::string CommLedger::to_csv() const {
  std::ostringstream os;
  os << "level,direction,distance,phases,messages,cells\n";
  for (const auto& [key, c] : entries_) {
    os << std::get<0>(key) << ',' << to_string(std::get<1>(key)) << ','
       << to_string(std::get<2>(key)) << ',' << c.phases << ',' << c.messages << ',' << c.cells
       << '\n';
  }
  return os.str();
}

void exchange_ghosts(const Level& level, const FieldSet& fields, CommLedger* ledger) {
  if (ledger != nullptr) ledger->phase(level.k, Direction::horizontal);
  for (std::size_t ip = 0; ip < level.ranks.size(); ++ip) {
    const int p = level.ranks[ip];
    Field& dst = *fields[ip];
    const Box halo = grow(level.owned[static_cast<std::size_t>(p)], 1);
    for (std::size_t iq = 0; iq < level.ranks.size(); ++iq) {
      if (iq == ip) continue;
      const int q = level.ranks[iq];
      const Box overlap = intersect(halo, level.owned[static_cast<std::size_t>(q)]);
      if (overlap.empty()) continue;
      region_copy(dst, *fields[iq], Region(overlap));
      if (ledger != nullptr) ledger->message(level.k, Direction::horizontal, q, p, overlap.volume());
    }
    fill_bc_ghosts(dst, level.domain);
  }
}

void restrict_to_owners(const Level& fine, const Level& coarse, std::span<const RestrictPair> pairs,
                        CommLedger* ledger) {
  if (ledger != nullptr) ledger->phase(fine.k, Direction::vertical);
  for (std::size_t ip = 0; ip < fine.ranks.size(); ++ip) {
    const int p = fine.ranks[ip];
    const Box target = coarsen(fine.owned[static_cast<std::size_t>(p)]);
    const int q = coarse.owner(target.lo());
    const int iq = coarse.slot(q);
    if (iq < 0 || !coarse.owned[static_cast<std::size_t>(q)].contains(target))
      throw ConfigError("restriction target " + to_string(target.lo()) + " spans coarse owners");
    for (const auto& pair : pairs) restrict_avg(*(*pair.fine)[ip], *(*pair.coarse)[static_cast<std::size_t>(iq)], target);
    if (ledger != nullptr && q != p)
      ledger->message(fine.k, Direction::vertical, p, q,
                      target.volume() * static_cast<long long>(pairs.size()));
  }
}

Field gather_patch(const Level& coarse, const FieldSet& src, int requester, const Box& need,
                   CommLedger* ledger, int ledger_k, Direction dir) {
  const Box box = intersect(need, coarse.domain);
  Field patch(box, 1, coarse.h);
  const Box wanted = intersect(patch.storage(), coarse.domain);
  for (int q : coarse.owners_of(wanted)) {
    const Box overlap = intersect(wanted, coarse.owned[static_cast<std::size_t>(q)]);
    region_copy(patch, *src[static_cast<std::size_t>(coarse.slot(q))], Region(overlap));
    if (ledger != nullptr && q != requester) ledger->message(ledger_k, dir, q, requester, overlap.volume());
  }
  fill_bc_ghosts(patch, coarse.domain);
  return patch;
}

void prolong_from_owners(const Level& coarse, const FieldSet& src, const Level& fine,
                         const FieldSet& dst, ProlongMode mode, CommLedger* ledger, Direction dir) {
  if (ledger != nullptr) ledger->phase(fine.k, dir);
  for (std::size_t ip = 0; ip < fine.ranks.size(); ++ip) {
    const int p = fine.ranks[ip];
    const Box& target = fine.owned[static_cast<std::size_t>(p)];
    const Field patch = gather_patch(coarse, src, p, coarsen_cover(target), ledger, fine.k, dir);
    prolong_trilinear(patch, *dst[ip], target, mode);
  }
}

}  // namespace srmg

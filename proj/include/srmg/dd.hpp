/// @file dd.hpp
/// @brief Simulated-rank domain decomposition: process grid, level hierarchy
/// with per-rank ownership, ghost exchange, inter-level transfers, and the
/// communication ledger that accounts for every simulated message.
///
/// Ranks live in one address space. A "message" is a copy between storage
/// owned by two different ranks; a "phase" is one bulk-synchronous step
/// (a barrier). Coarse levels agglomerate ownership onto a subset of ranks
/// whenever a rank's extent in some dimension would drop below two cells.

#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "srmg/grid.hpp"
#include "srmg/poisson.hpp"
#include "srmg/transfer.hpp"

namespace srmg {

/// Invalid or indivisible run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProcessGrid {
  Int3 dims{4, 2, 2};

  int size() const { return static_cast<int>(dims.product()); }
  /// Rank numbering is x fastest.
  Int3 coord(int rank) const;
  int rank(const Int3& c) const;
  bool contains(const Int3& c) const;
};

struct Level {
  int index = 0;  // 0 is the coarsest grid
  int k = 0;      // relative to the transition level (k <= 0 conventional)
  Box domain;
  double h = 1.0;
  Int3 active;             // active process counts per dimension
  std::vector<int> ranks;  // active ranks, ascending
  std::vector<Box> owned;  // indexed by rank; empty for idle ranks

  int owner(const Int3& cell) const;
  /// Position of rank in `ranks`, or -1 when idle on this level.
  int slot(int rank) const;
  /// Active ranks whose owned box intersects b.
  std::vector<int> owners_of(const Box& b) const;
};

class LevelHierarchy {
 public:
  /// Finest global grid = coarsest grid refined `refinements` times; the top
  /// `sr_levels` grids are labelled k = 1..K and the one below them k = 0.
  static LevelHierarchy from_fine_grid(const ProcessGrid& procs, int refinements, int sr_levels,
                                       const ProblemSpec& spec = {});
  /// Transition grid has per-rank cubes of edge pN0V on every rank.
  static LevelHierarchy from_transition(const ProcessGrid& procs, int pN0V, int sr_levels,
                                        const ProblemSpec& spec = {});

  const ProcessGrid& procs() const { return procs_; }
  const ProblemSpec& spec() const { return spec_; }
  int num_levels() const { return static_cast<int>(levels_.size()); }
  const Level& level(int index) const { return levels_.at(static_cast<std::size_t>(index)); }
  const Level& finest() const { return levels_.back(); }
  int transition_index() const { return num_levels() - 1 - sr_levels_; }
  int sr_levels() const { return sr_levels_; }
  /// Level with label k.
  const Level& at_k(int k) const { return level(transition_index() + k); }

 private:
  ProcessGrid procs_;
  ProblemSpec spec_;
  int sr_levels_ = 0;
  std::vector<Level> levels_;
};

enum class Direction { horizontal, vertical, fmg };
enum class Distance { near, far };

const char* to_string(Direction d);
const char* to_string(Distance d);

/// Two-level memory model used to classify traffic. By default every rank is
/// its own partition on levels k >= 1 and all ranks share one partition on
/// k <= 0.
struct MemoryPartition {
  int partition(int rank, int k) const { return k >= 1 ? rank : 0; }
  Distance classify(int from, int to, int k) const {
    return partition(from, k) == partition(to, k) ? Distance::near : Distance::far;
  }
  /// Distance class credited to a phase on level k.
  Distance phase_class(int k) const { return k >= 1 ? Distance::far : Distance::near; }
};

struct CommCounters {
  long long phases = 0;
  long long messages = 0;
  long long cells = 0;
};

/// Message/phase accounting keyed by (level k, direction, distance). Vertical
/// traffic between levels k and k-1 is credited to k. FMG interpolation is
/// kept under its own direction so V-cycle phases stay countable per visit.
class CommLedger {
 public:
  using Key = std::tuple<int, Direction, Distance>;

  explicit CommLedger(MemoryPartition partition = {}) : partition_(partition) {}

  void phase(int k, Direction dir);
  void message(int k, Direction dir, int from, int to, long long cells);
  void visit(int k) { ++visits_[k]; }
  void reset();

  const std::map<Key, CommCounters>& entries() const { return entries_; }
  CommCounters total(int k, Direction dir) const;
  CommCounters total(Direction dir) const;
  long long visits(int k) const;
  const std::map<int, long long>& visits() const { return visits_; }
  /// Horizontal messages received by rank on level k.
  long long rank_messages(int k, int rank) const;
  long long cells_sent() const { return cells_sent_; }
  long long cells_received() const { return cells_received_; }
  const MemoryPartition& partition() const { return partition_; }

  /// level,direction,distance,phases,messages,cells
  std::string to_csv() const;

  // Test hook for negative controls.
  CommCounters& mutable_entry(int k, Direction dir, Distance dist) { return entries_[{k, dir, dist}]; }

 private:
  MemoryPartition partition_;
  std::map<Key, CommCounters> entries_;
  std::map<int, long long> visits_;
  std::map<std::pair<int, int>, long long> rank_messages_;
  long long cells_sent_ = 0;
  long long cells_received_ = 0;
};

/// Fields of one level, one per active rank, ordered like Level::ranks.
using FieldSet = std::vector<Field*>;

/// Copies owners' values into every rank's in-domain ghost cells, then fills
/// boundary ghosts. Records one horizontal phase and one message per
/// (neighbor, rank) pair when a ledger is given.
void exchange_ghosts(const Level& level, const FieldSet& fields, CommLedger* ledger);

/// One vertical phase: every fine rank averages its owned cells onto the
/// coarse owner's storage for each (fine, coarse) field pair.
struct RestrictPair {
  const FieldSet* fine;
  FieldSet* coarse;
};
void restrict_to_owners(const Level& fine, const Level& coarse, std::span<const RestrictPair> pairs,
                        CommLedger* ledger);

/// Coarse patch over need ∩ domain with a one-cell ghost margin: in-domain
/// cells are copied from their owners in `src`, the rest by the boundary rule.
/// Messages are counted for every owner other than `requester`.
Field gather_patch(const Level& coarse, const FieldSet& src, int requester, const Box& need,
                   CommLedger* ledger, int ledger_k, Direction dir);

/// One vertical (or FMG) phase: every fine rank interpolates from a gathered
/// coarse patch onto its owned cells.
void prolong_from_owners(const Level& coarse, const FieldSet& src, const Level& fine,
                         const FieldSet& dst, ProlongMode mode, CommLedger* ledger, Direction dir);

/// Runs conventional FMG for the same global grid on a single rank. Oracle
/// for multi-rank runs.
struct ReferenceConfig {
  int refinements = 5;  // finest grid = (2,1,1) * 2^refinements
  int alpha = 1;
  int nu1 = 2;
  int nu2 = 2;
};
Field serial_reference_solve(const ReferenceConfig& cfg);

}  // namespace srmg

#include "srmg/sr.hpp"

#include <algorithm>
#include <chrono>

#include "srmg/poisson.hpp"
#include "srmg/transfer.hpp"

namespace srmg {

int buffer_schedule(const SRConfig& cfg, int k) {
  if (k < 1 || k > cfg.K)
    throw ConfigError("buffer_schedule: level " + std::to_string(k) + " outside 1.." +
                      std::to_string(cfg.K));
  if (cfg.schedule == ScheduleKind::mbs) return cfg.J1 << (k - 1);
  return 2 * ((cfg.A + cfg.B * (cfg.K - k)) / 2);
}

namespace {

void validate(const SRConfig& cfg) {
  if (cfg.K < 1) throw ConfigError("K must be at least 1");
  if (cfg.A < 0 || cfg.B < 0) throw ConfigError("A and B must be non-negative");
  if (cfg.schedule == ScheduleKind::mbs && (cfg.J1 < 2 || cfg.J1 % 2 != 0))
    throw ConfigError("J1 must be an even integer >= 2");
  if (cfg.max_reach < 0) throw ConfigError("max_reach must be non-negative");
}

// C ∪ GSR: the cells an interpolation onto level k writes.
Box interpolation_range(const SRRegions& r, const Box& domain) {
  return intersect(grow(r.C, 1), domain);
}

}  // namespace

std::vector<std::vector<SRRegions>> compute_regions(const LevelHierarchy& hier,
                                                    const SRConfig& cfg) {
  validate(cfg);
  if (hier.sr_levels() != cfg.K)
    throw ConfigError("hierarchy has " + std::to_string(hier.sr_levels()) +
                      " SR levels, configuration asks for " + std::to_string(cfg.K));
  const int nranks = hier.procs().size();
  std::vector<std::vector<SRRegions>> out(static_cast<std::size_t>(cfg.K + 1));

  for (int k = 0; k <= cfg.K; ++k) {
    const Level& lvl = hier.at_k(k);
    if (static_cast<int>(lvl.ranks.size()) != nranks)
      throw ConfigError("level k=" + std::to_string(k) + " does not use every rank");
    const int J = k == 0 ? 0 : buffer_schedule(cfg, k);
    auto& row = out[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(nranks));
    for (int p = 0; p < nranks; ++p) {
      SRRegions& r = row[static_cast<std::size_t>(p)];
      r.V = lvl.owned[static_cast<std::size_t>(p)];
      const Int3 n = r.V.extents();
      const int shortest = std::min({n[0], n[1], n[2]});
      if (cfg.max_reach > 0 && J > cfg.max_reach * shortest)
        throw InfeasibleConfig("buffer J_" + std::to_string(k) + "=" + std::to_string(J) +
                               " exceeds " + std::to_string(cfg.max_reach) + "x the genuine edge " +
                               std::to_string(shortest));
      r.C = intersect(grow(r.V, J), lvl.domain);
      r.G = subtract(grow(r.C, 1), r.C);
      for (const Box& b : r.G.boxes()) {
        const Box inside = intersect(b, lvl.domain);
        r.GSR.add_disjoint(inside);
        const Region outside = subtract(b, lvl.domain);
        for (const Box& o : outside.boxes()) r.GBC.add_disjoint(o);
      }
    }
  }

  for (int k = 0; k < cfg.K; ++k) {
    for (int p = 0; p < nranks; ++p) {
      SRRegions& r = out[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
      const SRRegions& up = out[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(p)];
      r.F = intersect(coarsen(up.C), r.C);
      if (k == 0) continue;
      // Interpolating onto C ∪ GSR of level k+1 reads the level-k stencil
      // footprint, which this rank holds only within grow(C_k, 1).
      const Box need = prolong_footprint(interpolation_range(up, hier.at_k(k + 1).domain));
      if (!grow(r.C, 1).contains(need))
        throw InfeasibleConfig("rank " + std::to_string(p) + " level k=" + std::to_string(k) +
                               " compute region cannot supply interpolation to level k=" +
                               std::to_string(k + 1));
    }
  }
  return out;
}

LevelHierarchy sr_hierarchy(const ProcessGrid& procs, const SRConfig& cfg,
                            const ProblemSpec& spec) {
  validate(cfg);
  return LevelHierarchy::from_transition(procs, cfg.pN0V, cfg.K, spec);
}

SRSolver::SRSolver(const LevelHierarchy& hier, const SRConfig& cfg, const CycleParams& params,
                   CommLedger* ledger)
    : hier_(hier),
      cfg_(cfg),
      params_(params),
      ledger_(ledger),
      regions_(compute_regions(hier, cfg)),
      coarse_(hier, params, ledger, hier.transition_index()) {
  patches_.resize(static_cast<std::size_t>(cfg.K + 1));
  for (int k = 1; k <= cfg.K; ++k) {
    auto& row = patches_[static_cast<std::size_t>(k)];
    row.reserve(static_cast<std::size_t>(hier.procs().size()));
    for (int p = 0; p < hier.procs().size(); ++p)
      row.emplace_back(regions(k, p).C, level(k).h, k < cfg.K);
  }
}

void SRSolver::smooth(int k, int degree, RhsField rhs) {
  if (degree <= 0) return;
  auto& row = patches_[static_cast<std::size_t>(k)];
  std::vector<SmoothPatch> sp;
  sp.reserve(row.size());
  for (auto& p : row) sp.push_back({&p.u, &(p.*rhs), &p.res, &p.dir, p.box});
  const Box& domain = level(k).domain;
  // Only boundary ghosts change; GSR values stay as interpolated.
  chebyshev(sp, params_.cheb(degree), [&] {
    for (auto& p : row) fill_bc_ghosts(p.u, domain);
  });
}

void SRSolver::interpolate_first(int k) {
  const Level& fine = level(k);
  const Level& coarse = level(k - 1);
  auto& row = patches_[static_cast<std::size_t>(k)];
  if (ledger_ != nullptr) ledger_->phase(k, Direction::fmg);
  if (k == 1) {
    const FieldSet src = coarse_.fields(hier_.transition_index(), &Patch::u);
    for (int p = 0; p < static_cast<int>(row.size()); ++p) {
      const Box range = interpolation_range(regions(k, p), fine.domain);
      const Field patch =
          gather_patch(coarse, src, p, coarsen_cover(range), ledger_, k, Direction::fmg);
      fmg_prolong(patch, row[static_cast<std::size_t>(p)].u, range);
    }
    return;
  }
  auto& below = patches_[static_cast<std::size_t>(k - 1)];
  for (int p = 0; p < static_cast<int>(row.size()); ++p) {
    Field& cu = below[static_cast<std::size_t>(p)].u;
    fill_bc_ghosts(cu, coarse.domain);
    fmg_prolong(cu, row[static_cast<std::size_t>(p)].u, interpolation_range(regions(k, p), fine.domain));
  }
}

void SRSolver::vcycle(int k, RhsField rhs) {
  const Level& fine = level(k);
  const Level& coarse = level(k - 1);
  if (ledger_ != nullptr) ledger_->visit(k);
  auto& row = patches_[static_cast<std::size_t>(k)];
  const int nranks = static_cast<int>(row.size());
  const int tidx = hier_.transition_index();
  std::vector<Patch>& below = k == 1 ? coarse_.patches(tidx) : patches_[static_cast<std::size_t>(k - 1)];

  smooth(k, params_.nu1, rhs);
  for (auto& p : row) {
    fill_bc_ghosts(p.u, fine.domain);
    residual(p.u, p.*rhs, p.res, p.box);
  }

  // Restriction onto the support region, rank-local.
  if (ledger_ != nullptr) ledger_->phase(k, Direction::vertical);
  for (int p = 0; p < nranks; ++p) {
    Patch& fp = row[static_cast<std::size_t>(p)];
    Patch& cp = below[static_cast<std::size_t>(p)];
    const Box& F = regions(k - 1, p).F;
    if (params_.restrict_solution) {
      restrict_avg(fp.u, cp.u, F);
    } else {
      region_fill(cp.u, 0.0, Region(F));
    }
    restrict_avg(fp.res, cp.rhs, F);
    std::copy(cp.u.data().begin(), cp.u.data().end(), cp.t.data().begin());
  }

  if (k == 1) {
    coarse_.refresh(tidx, &Patch::u);
    for (auto& cp : below) {
      apply_operator(cp.u, cp.res, cp.box);
      region_axpy(cp.rhs, 1.0, cp.res, Region(cp.box));
    }
    coarse_.vcycle(tidx, &Patch::rhs);
  } else {
    for (int p = 0; p < nranks; ++p) {
      Patch& cp = below[static_cast<std::size_t>(p)];
      const Box& F = regions(k - 1, p).F;
      fill_bc_ghosts(cp.u, coarse.domain);
      apply_operator(cp.u, cp.res, cp.box);
      // No fine information outside F: the coarse equation there is just
      // L u = L u, so the coarse solve leaves those cells to smoothing.
      region_axpy(cp.rhs, 1.0, cp.res, Region(F));
      region_copy(cp.rhs, cp.res, subtract(cp.box, F));
    }
    vcycle(k - 1, &Patch::rhs);
  }

  // Correction w - t, interpolated onto C ∪ GSR.
  if (ledger_ != nullptr) ledger_->phase(k, Direction::vertical);
  if (k == 1) {
    const Level& tl = hier_.level(tidx);
    for (auto& cp : below) region_diff(cp.res, cp.u, cp.t, Region(cp.box));
    const FieldSet src = coarse_.fields(tidx, &Patch::res);
    for (int p = 0; p < nranks; ++p) {
      const Box range = interpolation_range(regions(k, p), fine.domain);
      const Field patch =
          gather_patch(tl, src, p, coarsen_cover(range), ledger_, k, Direction::vertical);
      prolong_trilinear(patch, row[static_cast<std::size_t>(p)].u, range,
                        ProlongMode::add_correction);
    }
  } else {
    for (int p = 0; p < nranks; ++p) {
      Patch& cp = below[static_cast<std::size_t>(p)];
      region_diff(cp.res, cp.u, cp.t, Region(interpolation_range(regions(k - 1, p), coarse.domain)));
      fill_bc_ghosts(cp.res, coarse.domain);
      prolong_trilinear(cp.res, row[static_cast<std::size_t>(p)].u,
                        interpolation_range(regions(k, p), fine.domain), ProlongMode::add_correction);
    }
  }

  smooth(k, params_.nu2, rhs);
}

LevelReport SRSolver::measure(int k) {
  const Level& lvl = level(k);
  LevelReport rep;
  rep.k = k;
  rep.cells = lvl.domain.extents();
  rep.h = lvl.h;
  auto& row = patches_[static_cast<std::size_t>(k)];
  for (int p = 0; p < static_cast<int>(row.size()); ++p) {
    Patch& pt = row[static_cast<std::size_t>(p)];
    const Region V(regions(k, p).V);
    fill_bc_ghosts(pt.u, lvl.domain);
    residual(pt.u, pt.f, pt.res, V);
    rep.residual_inf = std::max(rep.residual_inf, region_inf_norm(pt.res, V));
    rep.error_inf = std::max(rep.error_inf, error_inf(pt.u, V, hier_.spec()));
  }
  return rep;
}

SolveReport SRSolver::solve() {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report = coarse_.fmg();
  for (int k = 1; k <= cfg_.K; ++k) {
    interpolate_first(k);
    smooth(k, params_.alpha, &Patch::f);
    for (int n = 0; n < params_.n_vcycles; ++n) vcycle(k, &Patch::f);
    report.levels.push_back(measure(k));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.phases = 0;
  report.messages = 0;
  if (ledger_ != nullptr) {
    for (const auto& [key, c] : ledger_->entries()) {
      report.phases += c.phases;
      report.messages += c.messages;
    }
  }
  return report;
}

double error_ratio(const SolveReport& sr, const SolveReport& conv) {
  return sr.finest().error_inf / conv.finest().error_inf;
}

}  // namespace srmg

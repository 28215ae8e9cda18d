#include "srmg/mg.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "srmg/poisson.hpp"
#include "srmg/transfer.hpp"

namespace srmg {

std::string SolveReport::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "level,N,error_inf,residual_inf\n";
  for (const auto& l : levels)
    os << l.k << ',' << to_string(l.cells) << ',' << l.error_inf << ',' << l.residual_inf << '\n';
  return os.str();
}

Patch::Patch(const Box& b, double h, bool coarse_storage)
    : box(b), u(b, 1, h), f(b, 1, h), res(b, 1, h), dir(b, 1, h) {
  if (coarse_storage) {
    rhs = Field(b, 1, h);
    t = Field(b, 1, h);
  }
  sample(f, Region(b), [](const Real3& x) { return rhs_f(x); });
}

ConventionalSolver::ConventionalSolver(const LevelHierarchy& hier, const CycleParams& params,
                                       CommLedger* ledger, int top_index)
    : hier_(hier), params_(params), ledger_(ledger),
      top_(top_index < 0 ? hier.num_levels() - 1 : top_index) {
  if (top_ >= hier.num_levels()) throw ConfigError("top level beyond hierarchy");
  const Level& coarsest = hier.level(0);
  if (coarsest.ranks.size() != 1)
    throw ConfigError("coarsest grid must live on a single rank");
  levels_.resize(static_cast<std::size_t>(top_ + 1));
  for (int idx = 0; idx <= top_; ++idx) {
    const Level& lvl = hier.level(idx);
    auto& pl = levels_[static_cast<std::size_t>(idx)];
    pl.reserve(lvl.ranks.size());
    for (int r : lvl.ranks)
      pl.emplace_back(lvl.owned[static_cast<std::size_t>(r)], lvl.h, idx < hier.num_levels() - 1);
  }
}

FieldSet ConventionalSolver::fields(int idx, Field Patch::*member) {
  FieldSet out;
  for (auto& p : patches(idx)) out.push_back(&(p.*member));
  return out;
}

void ConventionalSolver::refresh(int idx, Field Patch::*member, bool counted) {
  exchange_ghosts(hier_.level(idx), fields(idx, member), counted ? ledger_ : nullptr);
}

void ConventionalSolver::smooth(int idx, int degree, RhsField rhs) {
  if (degree <= 0) return;
  std::vector<SmoothPatch> sp;
  for (auto& p : patches(idx)) sp.push_back({&p.u, &(p.*rhs), &p.res, &p.dir, p.box});
  chebyshev(sp, params_.cheb(degree), [&] { refresh(idx, &Patch::u); });
}

void ConventionalSolver::vcycle(int idx, RhsField rhs) {
  const Level& lvl = hier_.level(idx);
  if (ledger_ != nullptr) ledger_->visit(lvl.k);
  if (idx == 0) {
    Patch& p = patches(0).front();
    coarse_solve(p.u, p.*rhs, lvl.domain);
    return;
  }
  const Level& coarse = hier_.level(idx - 1);

  smooth(idx, params_.nu1, rhs);
  refresh(idx, &Patch::u);
  for (auto& p : patches(idx)) residual(p.u, p.*rhs, p.res, p.box);

  FieldSet fu = fields(idx, &Patch::u);
  FieldSet fr = fields(idx, &Patch::res);
  FieldSet cu = fields(idx - 1, &Patch::u);
  FieldSet crhs = fields(idx - 1, &Patch::rhs);
  std::vector<RestrictPair> pairs{{&fr, &crhs}};
  if (params_.restrict_solution) {
    pairs.insert(pairs.begin(), RestrictPair{&fu, &cu});
  } else {
    for (Field* c : cu) c->fill(0.0);
  }
  restrict_to_owners(lvl, coarse, pairs, ledger_);

  // FAS right-hand side: I(r) + L_c(u_c), with t_c the restricted snapshot.
  for (auto& p : patches(idx - 1)) std::copy(p.u.data().begin(), p.u.data().end(), p.t.data().begin());
  refresh(idx - 1, &Patch::u);
  for (auto& p : patches(idx - 1)) {
    apply_operator(p.u, p.res, p.box);
    region_axpy(p.rhs, 1.0, p.res, Region(p.box));
  }

  vcycle(idx - 1, &Patch::rhs);

  for (auto& p : patches(idx - 1)) region_diff(p.res, p.u, p.t, Region(p.box));
  prolong_from_owners(coarse, fields(idx - 1, &Patch::res), lvl, fu, ProlongMode::add_correction,
                      ledger_, Direction::vertical);

  smooth(idx, params_.nu2, rhs);
}

LevelReport ConventionalSolver::measure(int idx) {
  const Level& lvl = hier_.level(idx);
  refresh(idx, &Patch::u, false);
  LevelReport rep;
  rep.k = lvl.k;
  rep.cells = lvl.domain.extents();
  rep.h = lvl.h;
  for (auto& p : patches(idx)) {
    residual(p.u, p.f, p.res, p.box);
    rep.residual_inf = std::max(rep.residual_inf, region_inf_norm(p.res, Region(p.box)));
    rep.error_inf = std::max(rep.error_inf, error_inf(p.u, Region(p.box), hier_.spec()));
  }
  return rep;
}

SolveReport ConventionalSolver::fmg() {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  for (auto& p : patches(0)) p.u.fill(0.0);
  vcycle(0, &Patch::f);
  report.levels.push_back(measure(0));
  for (int idx = 1; idx <= top_; ++idx) {
    prolong_from_owners(hier_.level(idx - 1), fields(idx - 1, &Patch::u), hier_.level(idx),
                        fields(idx, &Patch::u), ProlongMode::set, ledger_, Direction::fmg);
    smooth(idx, params_.alpha, &Patch::f);
    for (int n = 0; n < params_.n_vcycles; ++n) vcycle(idx, &Patch::f);
    report.levels.push_back(measure(idx));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (ledger_ != nullptr) {
    for (const auto& [key, c] : ledger_->entries()) {
      report.phases += c.phases;
      report.messages += c.messages;
    }
  }
  return report;
}

int ConventionalSolver::iterate(double rtol, int max_cycles) {
  double fnorm = 0.0;
  for (auto& p : patches(top_)) fnorm = std::max(fnorm, region_inf_norm(p.f, Region(p.box)));
  int cycles = 0;
  while (cycles < max_cycles) {
    if (measure(top_).residual_inf <= rtol * fnorm) return cycles;
    vcycle(top_, &Patch::f);
    ++cycles;
  }
  if (measure(top_).residual_inf <= rtol * fnorm) return cycles;
  throw SolverFailure("V-cycle iteration did not reach relative residual " + std::to_string(rtol) +
                      " in " + std::to_string(max_cycles) + " cycles");
}

SolveReport ConventionalSolver::report() {
  SolveReport rep;
  for (int idx = 0; idx <= top_; ++idx) rep.levels.push_back(measure(idx));
  return rep;
}

Field ConventionalSolver::gather_solution(int idx) const {
  const Level& lvl = hier_.level(idx);
  Field out(lvl.domain, 1, lvl.h);
  const auto& pl = levels_[static_cast<std::size_t>(idx)];
  for (const auto& p : pl) region_copy(out, p.u, Region(p.box));
  return out;
}

double gamma_of_r(double r) { return r / (4.0 * r + 3.0); }

Field serial_reference_solve(const ReferenceConfig& cfg) {
  const LevelHierarchy hier = LevelHierarchy::from_fine_grid({Int3{1, 1, 1}}, cfg.refinements, 0);
  CycleParams params;
  params.alpha = cfg.alpha;
  params.nu1 = cfg.nu1;
  params.nu2 = cfg.nu2;
  ConventionalSolver solver(hier, params);
  solver.fmg();
  return solver.gather_solution(hier.num_levels() - 1);
}

}  // namespace srmg

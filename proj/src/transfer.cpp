#include "srmg/transfer.hpp"

namespace srmg {

void restrict_avg(const Field& fine, Field& coarse, const Box& rc) {
  if (rc.empty()) return;
  require_in_storage(coarse, Region(rc), "restrict_avg");
  require_in_storage(fine, Region(refine(rc)), "restrict_avg");
  const std::size_t sy = fine.stride_y();
  const std::size_t sz = fine.stride_z();
  const double* fd = fine.data().data();
  for (int k = rc.lo()[2]; k <= rc.hi()[2]; ++k) {
    for (int j = rc.lo()[1]; j <= rc.hi()[1]; ++j) {
      for (int i = rc.lo()[0]; i <= rc.hi()[0]; ++i) {
        const double* c = fd + fine.index(2 * i, 2 * j, 2 * k);
        const double sum = (c[0] + c[1]) + (c[sy] + c[sy + 1]) + (c[sz] + c[sz + 1]) +
                           (c[sy + sz] + c[sy + sz + 1]);
        coarse(i, j, k) = 0.125 * sum;
      }
    }
  }
}

void restrict_avg(const Field& fine, Field& coarse, const Region& rc) {
  for (const auto& b : rc.boxes()) restrict_avg(fine, coarse, b);
}

Box prolong_footprint(const Box& rf) {
  if (rf.empty()) return rf;
  Int3 lo, hi;
  for (int d = 0; d < 3; ++d) {
    const int l = rf.lo()[d];
    const int h = rf.hi()[d];
    lo[d] = (l >> 1) - ((l & 1) == 0 ? 1 : 0);
    hi[d] = (h >> 1) + ((h & 1) == 1 ? 1 : 0);
  }
  return Box(lo, hi);
}

void prolong_trilinear(const Field& coarse, Field& fine, const Box& rf, ProlongMode mode) {
  if (rf.empty()) return;
  require_in_storage(fine, Region(rf), "prolong_trilinear");
  require_in_storage(coarse, Region(prolong_footprint(rf)), "prolong_trilinear");
  const bool add = mode == ProlongMode::add_correction;
  for (int k = rf.lo()[2]; k <= rf.hi()[2]; ++k) {
    const int pk = k >> 1;
    const int nk = pk + ((k & 1) != 0 ? 1 : -1);
    for (int j = rf.lo()[1]; j <= rf.hi()[1]; ++j) {
      const int pj = j >> 1;
      const int nj = pj + ((j & 1) != 0 ? 1 : -1);
      for (int i = rf.lo()[0]; i <= rf.hi()[0]; ++i) {
        const int pi = i >> 1;
        const int ni = pi + ((i & 1) != 0 ? 1 : -1);
        auto line = [&](int jj, int kk) {
          return 0.75 * coarse(pi, jj, kk) + 0.25 * coarse(ni, jj, kk);
        };
        auto plane = [&](int kk) { return 0.75 * line(pj, kk) + 0.25 * line(nj, kk); };
        const double v = 0.75 * plane(pk) + 0.25 * plane(nk);
        if (add) {
          fine(i, j, k) += v;
        } else {
          fine(i, j, k) = v;
        }
      }
    }
  }
}

void prolong_trilinear(const Field& coarse, Field& fine, const Region& rf, ProlongMode mode) {
  for (const auto& b : rf.boxes()) prolong_trilinear(coarse, fine, b, mode);
}

}  // namespace srmg

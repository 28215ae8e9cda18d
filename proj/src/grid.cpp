#include "srmg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace srmg {

std::ostream& operator<<(std::ostream& os, const Int3& i) {
  return os << '(' << i[0] << ',' << i[1] << ',' << i[2] << ')';
}

std::string to_string(const Int3& i) {
  return std::to_string(i[0]) + "x" + std::to_string(i[1]) + "x" + std::to_string(i[2]);
}

std::ostream& operator<<(std::ostream& os, const Box& b) {
  if (b.empty()) return os << "[empty]";
  return os << '[' << b.lo() << ".." << b.hi() << ']';
}

Box grow(const Box& b, int j) {
  if (b.empty()) return b;
  return Box(b.lo() - Int3{j, j, j}, b.hi() + Int3{j, j, j});
}

Box intersect(const Box& a, const Box& b) {
  if (a.empty() || b.empty()) return {};
  Int3 lo, hi;
  for (int d = 0; d < 3; ++d) {
    lo[d] = std::max(a.lo()[d], b.lo()[d]);
    hi[d] = std::min(a.hi()[d], b.hi()[d]);
  }
  return Box(lo, hi);
}

Box refine(const Box& b) {
  if (b.empty()) return b;
  return Box(b.lo() * 2, b.hi() * 2 + Int3{1, 1, 1});
}

namespace {
int floor_half(int i) { return i >> 1; }  // arithmetic shift rounds toward -inf
}  // namespace

Box coarsen(const Box& b) {
  if (b.empty()) return b;
  for (int d = 0; d < 3; ++d) {
    if ((b.lo()[d] & 1) != 0 || (b.hi()[d] & 1) != 1) {
      std::ostringstream msg;
      msg << "coarsen: box " << b << " is not aligned to even boundaries";
      throw AlignmentError(msg.str());
    }
  }
  return coarsen_cover(b);
}

Box coarsen_cover(const Box& b) {
  if (b.empty()) return b;
  Int3 lo, hi;
  for (int d = 0; d < 3; ++d) {
    lo[d] = floor_half(b.lo()[d]);
    hi[d] = floor_half(b.hi()[d]);
  }
  return Box(lo, hi);
}

long long Region::volume() const {
  long long v = 0;
  for (const auto& b : boxes_) v += b.volume();
  return v;
}

bool Region::contains(const Int3& i) const {
  return std::any_of(boxes_.begin(), boxes_.end(),
                     [&](const Box& b) { return b.contains(i); });
}

Region subtract(const Box& a, const Box& b) {
  Region out;
  const Box overlap = intersect(a, b);
  if (overlap.empty()) {
    out.add_disjoint(a);
    return out;
  }
  // Sweep axis by axis, peeling the slabs below and above the overlap and
  // shrinking the remainder to the overlap's extent in that axis.
  Int3 lo = a.lo();
  Int3 hi = a.hi();
  for (int d = 0; d < 3; ++d) {
    if (lo[d] < overlap.lo()[d]) {
      Int3 shi = hi;
      shi[d] = overlap.lo()[d] - 1;
      out.add_disjoint(Box(lo, shi));
    }
    if (hi[d] > overlap.hi()[d]) {
      Int3 slo = lo;
      slo[d] = overlap.hi()[d] + 1;
      out.add_disjoint(Box(slo, hi));
    }
    lo[d] = overlap.lo()[d];
    hi[d] = overlap.hi()[d];
  }
  return out;
}

Region subtract(const Region& a, const Box& b) {
  Region out;
  for (const auto& box : a.boxes()) {
    const Region pieces = subtract(box, b);
    for (const auto& piece : pieces.boxes()) out.add_disjoint(piece);
  }
  return out;
}

Region intersect(const Region& a, const Box& b) {
  Region out;
  for (const auto& box : a.boxes()) out.add_disjoint(intersect(box, b));
  return out;
}

Real3 cell_center(const Int3& i, double h, const Real3& origin) {
  return {origin[0] + i[0] * h + 0.5 * h, origin[1] + i[1] * h + 0.5 * h,
          origin[2] + i[2] * h + 0.5 * h};
}

Field::Field(const Box& box, int ghost, double h, double init)
    : box_(box), storage_(grow(box, ghost)), ghost_(ghost), h_(h) {
  if (ghost < 0) throw std::invalid_argument("Field: negative ghost width");
  if (box.empty()) return;
  slo_ = storage_.lo();
  sx_ = static_cast<std::size_t>(storage_.extent(0));
  sy_ = static_cast<std::size_t>(storage_.extent(1));
  data_.assign(static_cast<std::size_t>(storage_.volume()), init);
}

double& Field::at(const Int3& c) {
  if (!storage_.contains(c)) {
    std::ostringstream msg;
    msg << "Field::at: cell " << c << " outside storage " << storage_;
    throw ExtentError(msg.str());
  }
  return (*this)(c);
}

double Field::at(const Int3& c) const { return const_cast<Field*>(this)->at(c); }

void Field::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void require_in_storage(const Field& f, const Region& r, const char* what) {
  for (const auto& b : r.boxes()) {
    if (!f.storage().contains(b)) {
      std::ostringstream msg;
      msg << what << ": region box " << b << " exceeds storage " << f.storage();
      throw ExtentError(msg.str());
    }
  }
}

double region_inf_norm(const Field& f, const Region& r) {
  require_in_storage(f, r, "region_inf_norm");
  double m = 0.0;
  for (const auto& b : r.boxes())
    for_each_cell(b, [&](int i, int j, int k) { m = std::max(m, std::abs(f(i, j, k))); });
  return m;
}

void region_axpy(Field& y, double a, const Field& x, const Region& r) {
  require_in_storage(y, r, "region_axpy");
  require_in_storage(x, r, "region_axpy");
  for (const auto& b : r.boxes())
    for_each_cell(b, [&](int i, int j, int k) { y(i, j, k) += a * x(i, j, k); });
}

void region_copy(Field& dst, const Field& src, const Region& r) {
  require_in_storage(dst, r, "region_copy");
  require_in_storage(src, r, "region_copy");
  for (const auto& b : r.boxes())
    for_each_cell(b, [&](int i, int j, int k) { dst(i, j, k) = src(i, j, k); });
}

void region_fill(Field& f, double v, const Region& r) {
  require_in_storage(f, r, "region_fill");
  for (const auto& b : r.boxes()) for_each_cell(b, [&](int i, int j, int k) { f(i, j, k) = v; });
}

void region_diff(Field& out, const Field& a, const Field& b, const Region& r) {
  require_in_storage(out, r, "region_diff");
  require_in_storage(a, r, "region_diff");
  require_in_storage(b, r, "region_diff");
  for (const auto& box : r.boxes())
    for_each_cell(box, [&](int i, int j, int k) { out(i, j, k) = a(i, j, k) - b(i, j, k); });
}

}  // namespace srmg

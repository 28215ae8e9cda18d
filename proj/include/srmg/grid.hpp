/// @file grid.hpp
/// @brief Integer index-space boxes, disjoint box regions, and cell-centered
/// field storage with a ghost margin.
///
/// Boxes are closed intervals of cell indices in 3D (lo and hi inclusive).
/// Every region operation in the solver is expressed in terms of these types.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace srmg {

struct Int3 {
  std::array<int, 3> v{0, 0, 0};

  constexpr Int3() = default;
  constexpr Int3(int x, int y, int z) : v{x, y, z} {}

  constexpr int& operator[](int d) { return v[static_cast<std::size_t>(d)]; }
  constexpr int operator[](int d) const { return v[static_cast<std::size_t>(d)]; }

  friend constexpr bool operator==(const Int3&, const Int3&) = default;
  friend constexpr Int3 operator+(Int3 a, const Int3& b) {
    for (int d = 0; d < 3; ++d) a[d] += b[d];
    return a;
  }
  friend constexpr Int3 operator-(Int3 a, const Int3& b) {
    for (int d = 0; d < 3; ++d) a[d] -= b[d];
    return a;
  }
  friend constexpr Int3 operator*(Int3 a, int s) {
    for (int d = 0; d < 3; ++d) a[d] *= s;
    return a;
  }

  constexpr long long product() const {
    return static_cast<long long>(v[0]) * v[1] * v[2];
  }
};

std::ostream& operator<<(std::ostream& os, const Int3& i);
/// "64x32x32"
std::string to_string(const Int3& i);

using Real3 = std::array<double, 3>;

/// Grid alignment violations (coarsening a box that does not start on an even
/// index or end on an odd one).
class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Access to cells outside a field's storage extent.
class ExtentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Box {
 public:
  /// Empty box.
  constexpr Box() : lo_{0, 0, 0}, hi_{-1, -1, -1} {}
  constexpr Box(Int3 lo, Int3 hi) : lo_(lo), hi_(hi) {
    if (!valid()) {
      lo_ = {0, 0, 0};
      hi_ = {-1, -1, -1};
    }
  }
  /// Box [0, n-1] in each dimension.
  static constexpr Box from_extent(Int3 n) { return Box({0, 0, 0}, n - Int3{1, 1, 1}); }

  constexpr const Int3& lo() const { return lo_; }
  constexpr const Int3& hi() const { return hi_; }
  constexpr bool empty() const { return !valid(); }
  constexpr int extent(int d) const { return empty() ? 0 : hi_[d] - lo_[d] + 1; }
  constexpr Int3 extents() const { return {extent(0), extent(1), extent(2)}; }
  constexpr long long volume() const { return extents().product(); }

  constexpr bool contains(const Int3& i) const {
    for (int d = 0; d < 3; ++d)
      if (i[d] < lo_[d] || i[d] > hi_[d]) return false;
    return true;
  }
  /// True when every cell of b lies in this box (an empty b is always contained).
  constexpr bool contains(const Box& b) const {
    if (b.empty()) return true;
    if (empty()) return false;
    for (int d = 0; d < 3; ++d)
      if (b.lo_[d] < lo_[d] || b.hi_[d] > hi_[d]) return false;
    return true;
  }

  friend constexpr bool operator==(const Box& a, const Box& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  constexpr bool valid() const {
    return lo_[0] <= hi_[0] && lo_[1] <= hi_[1] && lo_[2] <= hi_[2];
  }

  Int3 lo_;
  Int3 hi_;
};

std::ostream& operator<<(std::ostream& os, const Box& b);

Box grow(const Box& b, int j);
Box intersect(const Box& a, const Box& b);
/// Each cell maps to its 8 children.
Box refine(const Box& b);
/// Exact inverse of refine; throws AlignmentError unless lo is even and hi odd.
Box coarsen(const Box& b);
/// Smallest coarse box whose refinement covers b (floor division of both ends).
Box coarsen_cover(const Box& b);

/// Pairwise-disjoint union of boxes.
class Region {
 public:
  Region() = default;
  explicit Region(const Box& b) {
    if (!b.empty()) boxes_.push_back(b);
  }

  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  long long volume() const;
  bool contains(const Int3& i) const;

  /// Appends b; the caller guarantees disjointness with existing members.
  void add_disjoint(const Box& b) {
    if (!b.empty()) boxes_.push_back(b);
  }

 private:
  std::vector<Box> boxes_;
};

/// a \ b as at most six boxes: x slabs first, then y, then z.
Region subtract(const Box& a, const Box& b);
Region subtract(const Region& a, const Box& b);
Region intersect(const Region& a, const Box& b);

/// Cell-center coordinate: origin + i*h + h/2.
Real3 cell_center(const Int3& i, double h, const Real3& origin = {0.0, 0.0, 0.0});

/// Cell-centered scalar field over box() with a ghost margin. Storage is a
/// dense array over grow(box, ghost), x fastest.
class Field {
 public:
  Field() = default;
  Field(const Box& box, int ghost, double h, double init = 0.0);

  const Box& box() const { return box_; }
  const Box& storage() const { return storage_; }
  int ghost() const { return ghost_; }
  double h() const { return h_; }
  bool allocated() const { return !data_.empty(); }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i - slo_[0]) +
           sx_ * (static_cast<std::size_t>(j - slo_[1]) +
                  sy_ * static_cast<std::size_t>(k - slo_[2]));
  }
  std::size_t index(const Int3& c) const { return index(c[0], c[1], c[2]); }

  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  double& operator()(const Int3& c) { return data_[index(c)]; }
  double operator()(const Int3& c) const { return data_[index(c)]; }

  /// Bounds-checked access; throws ExtentError outside storage().
  double& at(const Int3& c);
  double at(const Int3& c) const;

  /// Distance between consecutive y and z rows in the flat array.
  std::size_t stride_y() const { return sx_; }
  std::size_t stride_z() const { return sx_ * sy_; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void fill(double v);

 private:
  Box box_;
  Box storage_;
  int ghost_ = 0;
  double h_ = 1.0;
  Int3 slo_;
  std::size_t sx_ = 0;
  std::size_t sy_ = 0;
  std::vector<double> data_;
};

/// Throws ExtentError unless every cell of r lies in f's storage.
void require_in_storage(const Field& f, const Region& r, const char* what);

/// Calls fn(i, j, k) for every cell of b, x fastest.
template <class Fn>
void for_each_cell(const Box& b, Fn&& fn) {
  if (b.empty()) return;
  for (int k = b.lo()[2]; k <= b.hi()[2]; ++k)
    for (int j = b.lo()[1]; j <= b.hi()[1]; ++j)
      for (int i = b.lo()[0]; i <= b.hi()[0]; ++i) fn(i, j, k);
}

double region_inf_norm(const Field& f, const Region& r);
/// y <- y + a*x on r.
void region_axpy(Field& y, double a, const Field& x, const Region& r);
/// dst <- src on r.
void region_copy(Field& dst, const Field& src, const Region& r);
void region_fill(Field& f, double v, const Region& r);
/// out <- a - b on r.
void region_diff(Field& out, const Field& a, const Field& b, const Region& r);

}  // namespace srmg

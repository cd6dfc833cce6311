// Finite unions of half-open axis-aligned boxes  prod [lo_i, hi_i)  whose
// coordinates are exact rationals times a common unit (pi or 1).
//
// Coordinates are stored as rational coefficients of the unit; the measure
// of an n-dimensional set is a rational times unit^n.  Boxes are kept
// pairwise disjoint; canonicalize() additionally merges them into a unique
// representation for a given coordinate grid so equal sets compare equal.
// Images of half-open boxes under reflections are half-open again by
// convention (they differ from the true image by a null set).
#pragma once

#include "cwave/linalg.hpp"

#include <string>
#include <vector>

namespace cwave {

struct RBox {
  Vec<Rational> lo, hi;  // lo < hi componentwise
  size_t dim() const { return lo.dim(); }
  Rational volume() const;
  bool contains(const Vec<Rational>& x) const;  // lo <= x < hi
  friend bool operator==(const RBox& a, const RBox& b) { return a.lo == b.lo && a.hi == b.hi; }
  friend bool operator<(const RBox& a, const RBox& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); }
};

class DyadicBoxSet {
 public:
  DyadicBoxSet() = default;
  // Empty set of the given dimension; unit_power 1 means coordinates are
  // multiples of pi, 0 plain rationals.
  explicit DyadicBoxSet(size_t dim, int unit_power = 1) : dim_(dim), unit_(unit_power) {}
  static DyadicBoxSet box(const Vec<Rational>& lo, const Vec<Rational>& hi, int unit_power = 1);
  static DyadicBoxSet interval(const Rational& lo, const Rational& hi, int unit_power = 1);
  static DyadicBoxSet from_boxes(size_t dim, const std::vector<RBox>& boxes, int unit_power = 1);
  // Boxes the caller knows to be pairwise disjoint and nonempty.
  static DyadicBoxSet from_disjoint(size_t dim, std::vector<RBox> boxes, int unit_power = 1);

  size_t dim() const { return dim_; }
  int unit_power() const { return unit_; }
  const std::vector<RBox>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }

  // Measure as coefficient of unit^(n * unit_power) and as an exact Scalar.
  Rational measure_coeff() const;
  Scalar measure() const;
  double measure_double() const { return to_double(measure()); }

  bool contains(const Vec<Rational>& x) const;
  RBox bounding_box() const;  // throws on the empty set

  DyadicBoxSet unite(const DyadicBoxSet& o) const;
  DyadicBoxSet intersect(const DyadicBoxSet& o) const;
  DyadicBoxSet subtract(const DyadicBoxSet& o) const;
  bool intersects(const DyadicBoxSet& o) const;
  bool subset_of(const DyadicBoxSet& o) const;
  bool same_set(const DyadicBoxSet& o) const;

  // Image under x -> L x + b (coordinates in units).  L must be a signed
  // permutation times a positive diagonal; otherwise std::domain_error.
  DyadicBoxSet transform(const AffineMap<Rational>& g) const;
  DyadicBoxSet translate(const Vec<Rational>& t) const;
  DyadicBoxSet scale(const Rational& c) const;  // x -> c x, c != 0
  DyadicBoxSet mirror(size_t axis) const;        // x_axis -> -x_axis

  // Merge into the canonical representation (coordinate grid, greedy
  // row-major merging).
  DyadicBoxSet canonical() const;

  std::string to_json() const;
  static DyadicBoxSet from_json(const std::string& text);

 private:
  void check(const DyadicBoxSet& o) const;
  void add_disjoint(const RBox& b);
  size_t dim_ = 1;
  int unit_ = 1;
  std::vector<RBox> boxes_;
};

// Is the affine map representable on boxes (signed permutation times a
// positive diagonal)?
bool is_axis_aligned(const AffineMap<Rational>& g);

// Inner and outer dyadic approximations of the Euclidean disk |x| < r
// (coordinates in units) on a grid of 2^depth cells per axis of the
// bounding square.  inner is contained in the disk, outer contains it.
struct DiskApproximation {
  DyadicBoxSet inner, outer;
};
DiskApproximation disk_approximation(const Rational& radius, int depth, int unit_power = 0);

}  // namespace cwave

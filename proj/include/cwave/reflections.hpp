// Root systems, reflection groups and foldable figures.
//
// A foldable figure is a convex polytope F whose bounding hyperplanes
// generate an affine reflection group having F as a fundamental domain.
// Group elements are handled as exact affine isometries; a WeylWord records
// the generator sequence that produced an element.
#pragma once

#include "cwave/geometry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cwave {

// ---------------------------------------------------------------------------
// Roots and reflections

template <class T>
Vec<T> coroot(const Vec<T>& r);  // 2 r / <r, r>

// rho_r(x) = x - 2 <x,r>/<r,r> r.  Throws std::invalid_argument for r = 0.
template <class T>
Vec<T> reflect_root(const Vec<T>& r, const Vec<T>& x);

// rho_{r,k}(x) = x - 2 (<x,r> - k)/<r,r> r = rho_r(x) + k r^vee.
template <class T>
Vec<T> affine_reflect(const Vec<T>& r, const T& k, const Vec<T>& x);

// The isometry rho_{r,k} as an affine map.
template <class T>
AffineMap<T> affine_reflection(const Vec<T>& r, const T& k);

template <class T>
struct RootSystem {
  std::vector<Vec<T>> roots;
  std::vector<bool> positive;  // positive-subset marker, same length as roots

  struct Report {
    bool ok = true;
    std::vector<std::string> failures;
  };
  // Checks span, closure under negation (and no other multiples), closure
  // under the reflections rho_r, and integrality 2<s,r>/<r,r> in Z.
  Report validate() const;
};

// Closure of a finite set of generators under composition.  Throws
// std::runtime_error if more than max_order elements are produced.
template <class T>
std::vector<AffineMap<T>> generate_group(const std::vector<AffineMap<T>>& generators,
                                         size_t max_order = 100000);

struct KleinFour {
  RootSystem<Rational> roots;
  std::vector<AffineMap<Rational>> generators;  // rho_1 (x-axis root), rho_2 (y-axis root)
  std::vector<AffineMap<Rational>> elements;    // the generated group
};
KleinFour klein_four_group();

// ---------------------------------------------------------------------------
// Foldable figures

template <class T>
struct WeylWord {
  std::vector<int> word;  // generator indices, applied as g_{w0} o g_{w1} o ...
  AffineMap<T> iso;
};

template <class T>
struct Box {
  Vec<T> lo, hi;
};

template <class T>
struct FoldableFigure {
  std::string name;
  std::vector<Vec<T>> vertices;      // cyclic order for polygons
  std::vector<Hyperplane<T>> walls;  // figure = intersection of {<x,n> <= c}
  std::vector<AffineMap<T>> generators;  // reflection about walls[i]
  Vec<T> theta;                       // interior base point

  size_t dim() const { return theta.dim(); }
  bool contains(const Vec<T>& x) const;           // closed figure
  bool strictly_contains(const Vec<T>& x) const;  // interior
  bool on_boundary(const Vec<T>& x) const { return contains(x) && !strictly_contains(x); }
  Box<T> bounding_box() const;
  T volume() const;  // area for n = 2, length for n = 1

  struct Report {
    bool ok = true;
    std::vector<std::string> failures;
  };
  // Generators are involutions fixing their walls, theta is interior, and
  // the vertex hull agrees with the half-space description on a test grid.
  Report validate() const;
};

// Build a figure from vertices and outward walls; generators are derived.
template <class T>
FoldableFigure<T> make_figure(std::string name, std::vector<Vec<T>> vertices,
                              std::vector<Hyperplane<T>> walls, Vec<T> theta);

// Built-in figures.
FoldableFigure<Scalar> square_C();             // [-pi, pi]^2, theta = 0
FoldableFigure<Scalar> quarter_square();       // [0, pi]^2 (mirrors at all of pi Z)
FoldableFigure<Scalar> interval_C();           // [-pi, pi] in one dimension
FoldableFigure<Rational> unit_square();        // [0, 1]^2
FoldableFigure<Rational> right_triangle();     // (0,0), (1,0), (0,1)
FoldableFigure<Rational> right_triangle_cell();  // (1/2,0), (1,0), (1/2,1/2)
FoldableFigure<double> equilateral_triangle();   // side 1, data only

// ---------------------------------------------------------------------------
// Group actions on the tessellation

template <class T>
struct Cell {
  WeylWord<T> element;
  std::vector<Vec<T>> vertices;  // image of the figure's vertices
};

// Every group element whose image of the figure meets the region in a set of
// positive measure, exactly once, ordered by word length then lexicographic.
template <class T>
std::vector<Cell<T>> enumerate_group(const FoldableFigure<T>& figure, const Box<T>& region);

// Repeatedly reflect x across a violated wall until it lies in the figure.
// Returns (y, w) with w.iso(y) = x.  Throws after max_steps reflections.
template <class T>
std::pair<Vec<T>, WeylWord<T>> fold(const FoldableFigure<T>& figure, const Vec<T>& x,
                                    size_t max_steps = 1000000);

template <class T>
struct Subdivision {
  FoldableFigure<T> cell;       // F = u_1(Delta)
  FoldableFigure<T> delta;      // Delta = center + kappa (F - center)
  int kappa = 2;
  size_t center_vertex = 0;
  std::vector<AffineMap<T>> maps;  // u_1 .. u_N, ratio 1/kappa
  size_t size() const { return maps.size(); }
};

// Cut Delta = kappa F (scaled about the chosen vertex of F) into the kappa^n
// cells of F's tessellation lying in Delta.  u_1 is the scaling onto F and
// u_j = r_j o u_1 where r_j is the group element carrying F to the j-th cell.
template <class T>
Subdivision<T> subdivide(const FoldableFigure<T>& figure, int kappa,
                         std::optional<size_t> center_vertex = std::nullopt);

// Semidirect structure W~ = W_p x| Gamma relative to a special vertex p.
template <class T>
struct SemidirectStructure {
  Vec<T> p;
  std::vector<Hyperplane<T>> walls_through_p;
  std::vector<AffineMap<T>> stabilizer;    // finite Weyl group at p
  std::vector<Vec<T>> coroot_translations;  // generators of Gamma

  struct Decomposition {
    AffineMap<T> w;      // fixes p, element of the stabilizer
    Vec<T> translation;  // g = translation o w
    bool w_in_stabilizer = false;
    bool translation_in_lattice = false;
  };
  Decomposition decompose(const AffineMap<T>& g) const;
};

template <class T>
SemidirectStructure<T> semidirect_structure(const FoldableFigure<T>& figure, size_t vertex);

// Integer-lattice membership: is v an integer combination of gens?
// Exact types only.
template <class T>
bool lattice_contains(const std::vector<Vec<T>>& gens, const Vec<T>& v);

// Clip a convex polygon against an axis-aligned box (n = 2) and return the
// area of the intersection.
template <class T>
T clipped_area(const std::vector<Vec<T>>& polygon, const Box<T>& box);
template <class T>
T polygon_area(const std::vector<Vec<T>>& polygon);

// String key identifying a group element (exact, or rounded at 1e-9).
template <class T>
std::string element_key(const AffineMap<T>& g);

}  // namespace cwave

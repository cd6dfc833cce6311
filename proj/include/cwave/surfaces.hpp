// Fractal surfaces over foldable figures.
//
// A surface spec consists of a domain Delta, similitudes u_i onto the N
// subcells of Delta, a scaling |s| < 1 and polynomial data lambda_i.  The
// surface is the fixed point of
//     (B f)(x) = lambda_i(u_i^{-1} x) + s f(u_i^{-1} x),  x in u_i(Delta).
// Values are computed exactly on the refined vertex mesh: a leaf cell
// u_{i1} o ... o u_{ik}(Delta) stores the values at its vertices as seen
// from inside the cell, so discontinuities show up as disagreeing entries.
#pragma once

#include "cwave/fif.hpp"
#include "cwave/poly.hpp"
#include "cwave/reflections.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cwave {

struct SurfaceSpec {
  std::string name;
  FoldableFigure<Rational> delta;
  std::vector<AffineMap<Rational>> maps;  // u_1..u_N
  Rational s{0};
  std::vector<Poly<Rational>> lambda;     // lambda_1..lambda_N
  int degree = 1;

  size_t size() const { return maps.size(); }
  // Throws std::invalid_argument for malformed specs.
  void check() const;
};

// Spec from a subdivision with the given data.
SurfaceSpec make_spec(const Subdivision<Rational>& sub, Rational s, std::vector<Poly<Rational>> lambda,
                      std::string name = "surface");

// Named fixtures: "ex5.2" is the right triangle (0,0),(1,0),(0,1) with the
// four similitudes and affine data listed in fixture_triangle_surface().
SurfaceSpec fixture_triangle_surface();
SurfaceSpec surface_fixture(const std::string& name);

// ---------------------------------------------------------------------------
// Face conditions

// Data coordinates: lambda_i = sum over monomials m of x[i * M + m] * m(x),
// with monomials of total degree <= d in graded order (1, x, y, x^2, ...).
std::vector<std::vector<int>> monomial_exponents(size_t nvars, int degree);
std::vector<Rational> data_vector(const SurfaceSpec& spec);
std::vector<Poly<Rational>> data_from_vector(size_t nvars, int degree, size_t ncells, const std::vector<Rational>& x);

// Continuity of the fixed point across every common face e_ij of the
// subcells, as linear constraints on the data vector.  On e_ij the two
// one-sided values are lambda_i(u_i^{-1} x) + s f(u_i^{-1} x) and the same
// with j, so continuity demands f(P(t)) - f(Q(t)) = h(t) for a polynomial h
// on a pair of faces P, Q of Delta.  Substituting the fixed-point equation
// on the pieces of P and Q produces further such statements; the set of face
// pairs is finite, and the statements are consistent iff the fixed point is
// continuous (their defects satisfy D = s D', hence vanish).  Each row is a
// linear functional of the data that must be zero.  Planar domains only.
struct ContinuityConstraints {
  std::vector<std::vector<Rational>> rows;
  std::vector<std::pair<size_t, size_t>> origin;  // 0-based face (i, j) each row descends from
  size_t face_pairs = 0;                            // distinct face pairs visited
};
ContinuityConstraints continuity_constraints(const FoldableFigure<Rational>& delta,
                                             const std::vector<AffineMap<Rational>>& maps, const Rational& s,
                                             int degree, int kappa);

struct FaceViolation {
  size_t i = 0, j = 0;  // 1-based subcell indices of the face
  std::string kind;     // "continuity" or "literal"
  std::string detail;
};

struct ConditionReport {
  bool ok = true;          // continuity conditions hold
  bool literal_ok = true;  // the literal face condition holds
  std::vector<FaceViolation> violations;
  std::vector<FaceViolation> literal_violations;
  size_t constraints_checked = 0;
};

// Exact check of the continuity constraints.  The literal check asks that
// u_i^{-1}(e_ij) = u_j^{-1}(e_ij) as sets and lambda_i = lambda_j there; it is
// stronger than continuity and reported separately.
ConditionReport validate_condition_star(const SurfaceSpec& spec);

// ---------------------------------------------------------------------------

struct MeshCell {
  std::vector<int> word;             // u_{w0} o u_{w1} o ... (0-based)
  std::vector<Vec<Rational>> points;  // images of Delta's vertices
  std::vector<Rational> values;       // cell-side values at those points
};

class FractalSurface {
 public:
  explicit FractalSurface(SurfaceSpec spec);
  const SurfaceSpec& spec() const { return spec_; }
  const std::vector<Rational>& delta_vertex_values() const { return base_; }

  // Leaf cells of the level-`depth` refinement, word-lexicographic order.
  std::vector<MeshCell> mesh(int depth) const;
  // Distinct mesh vertices with their values; `max_jump` receives the largest
  // disagreement between cells sharing a vertex.
  std::map<Vec<Rational>, Rational> vertex_table(int depth, Rational* max_jump = nullptr) const;

  EvalResult evaluate(const Vec<Rational>& x, int depth = 64) const;
  double evaluate_double(const Vec<double>& x, int depth = 48) const;
  double sup_bound() const;

 private:
  SurfaceSpec spec_;
  std::vector<Rational> base_;
  std::vector<AffineMap<Rational>> inv_;
};

// fixed_point(spec, depth): validates the face conditions (throws
// std::invalid_argument when they fail) and returns the surface.
FractalSurface fixed_point(const SurfaceSpec& spec);

// ---------------------------------------------------------------------------
// Basis surfaces

struct BasisFamily {
  std::vector<Vec<Rational>> vertices;  // inner and outer vertices, sorted
  std::vector<SurfaceSpec> specs;        // phi_nu
  std::vector<ConditionReport> reports;  // face conditions per phi_nu
};

// Affine data lambda_i determined by prescribed values z at the vertices of
// the subcells: lambda_i(V) = z(u_i V) - s z(V) on the vertices V of Delta.
// Requires a simplex domain.
std::vector<Poly<Rational>> data_from_vertex_values(const FoldableFigure<Rational>& delta,
                                                    const std::vector<AffineMap<Rational>>& maps, const Rational& s,
                                                    const std::map<Vec<Rational>, Rational>& z);

BasisFamily basis_surfaces(const SurfaceSpec& templ);

// u_w^# phi restricted to u_w(Delta): evaluation by unrolling the word, and
// the refined mesh restricted to the leaves below w.
struct RefinedSurface {
  FractalSurface base;
  std::vector<int> word;  // 0-based
  std::vector<MeshCell> mesh(int depth) const;  // leaves of u_w(Delta) at |w| + depth
  EvalResult evaluate(const Vec<Rational>& x, int depth = 64) const;  // x in u_w(Delta)
};
std::vector<RefinedSurface> refine_basis(const std::vector<int>& word, const std::vector<FractalSurface>& basis);

// Mesh quadrature: sum over leaves of area * mean(f g at the vertices).
double mesh_inner_product(const std::vector<MeshCell>& f, const std::vector<MeshCell>& g);

// ---------------------------------------------------------------------------
// Exact integrals over Delta (planar convex domains)

// int_P p for a convex polygon P given by its vertices in cyclic order.
Rational polygon_integral(const Poly<Rational>& p, const std::vector<Vec<Rational>>& polygon);

// Moments int_Delta f m for the monomials m = monomial_exponents(2, max_degree),
// from the self-similarity f(u_i z) = lambda_i(z) + s f(z).  Throws
// std::domain_error if the moment recursion is singular.
std::vector<Rational> surface_moments(const SurfaceSpec& spec, int max_degree);

// int_Delta f p using precomputed moments of f.
Rational surface_poly_integral(const std::vector<Rational>& moments, int max_degree, const Poly<Rational>& p);

// int_Delta f g for two surfaces sharing Delta, the maps and s.
Rational surface_inner_product(const SurfaceSpec& f, const SurfaceSpec& g);

// ---------------------------------------------------------------------------
// Global extension over the reflection group of Delta

class GlobalSurface {
 public:
  // Lambda: group element key (element_key of r) -> spec on Delta.
  GlobalSurface(FoldableFigure<Rational> delta, std::map<std::string, SurfaceSpec> table);
  // Same spec on every cell.
  static GlobalSurface constant(const SurfaceSpec& spec);

  // Checks that every element whose cell meets the region has an entry;
  // throws std::out_of_range("missing word entry") otherwise.
  void require_region(const Box<Rational>& region) const;

  // f_Lambda(x) = f_{Lambda(r)}(r^{-1} x) for x in r(Delta interior); nullopt
  // on the reflecting hyperplanes.
  std::optional<double> evaluate(const Vec<Rational>& x, int depth = 40) const;
  const FoldableFigure<Rational>& delta() const { return delta_; }

 private:
  FoldableFigure<Rational> delta_;
  std::map<std::string, FractalSurface> table_;
  std::optional<FractalSurface> fallback_;
};

GlobalSurface extend_global(const FoldableFigure<Rational>& delta, std::map<std::string, SurfaceSpec> table,
                            const Box<Rational>& region);

}  // namespace cwave

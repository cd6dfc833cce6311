// Multiresolution analysis generated by fractal surfaces on a foldable
// figure F with 0 as a vertex.
//
// Delta = kappa F is cut into N = kappa^n cells Delta_i = u_i(Delta) with
// u_1 = x / kappa and u_j = r_j o u_1.  V_0|Delta is the space of continuous
// fractal surfaces on Delta whose data lambda_i are polynomials of total
// degree <= d; its dimension is computed exactly as the null space of the
// continuity constraints.  An orthonormal scaling vector Phi is obtained by
// Gram-Schmidt in L^2(Delta) from exact Gram matrices, and
//     Phi(x / kappa) = sum_i P(r_i) Phi(r_i x),   r_i = u_i^{-1} o (x / kappa),
//     Psi(x / kappa) = sum_i Q(r_i) Phi(r_i x),
// with P, Q exact up to the irrational normalizers of Gram-Schmidt.
// Translates Phi o r run over the reflection group generated by the walls of
// Delta, whose cells r^{-1}(Delta) tile the plane.
#pragma once

#include "cwave/surfaces.hpp"

#include <map>
#include <string>
#include <vector>

namespace cwave {

struct MRAConfig {
  std::string figure = "square";  // "square" (unit square) or "triangle"
  int kappa = 2;
  int degree = 1;
  Rational s{1, 2};  // scaling of the fractal surfaces, |s| < 1
  int mesh_depth = 5;  // depth of the checking mesh
};

// The figures with 0 as a special vertex: the unit square [0,1]^2 and the
// isosceles right triangle (0,0), (-1,0), (-1,1) whose 45-degree vertex is 0.
FoldableFigure<Rational> mra_figure(const std::string& name);

struct DimensionCount {
  size_t formula_A = 0;  // (d+1) N
  size_t formula_B = 0;  // (kappa^n - 1)(d+1) N
  size_t actual_A = 0;   // dim V_0|Delta
  size_t actual_B = 0;   // dim V_1|Delta - dim V_0|Delta
  bool matches() const { return formula_A == actual_A && formula_B == actual_B; }
};

// Data of f o u_j for each j when f has data x (the dilation map delta_kappa
// restricted to one cell): lambda'_i = lambda_j o u_i + s (lambda_i - lambda_j).
std::vector<Poly<Rational>> delta_kappa_cell(const std::vector<AffineMap<Rational>>& maps, const Rational& s,
                                             const std::vector<Poly<Rational>>& lambda, size_t j);

// Finite-support tables over the reflection group of Delta: group element
// (exact isometry) -> data or coefficient vector.
template <class V>
struct ElementTable {
  std::map<std::string, std::pair<AffineMap<Rational>, V>> entries;  // keyed by element_key
  void set(const AffineMap<Rational>& g, V v) { entries[element_key(g)] = {g, std::move(v)}; }
};
using DataTable = ElementTable<std::vector<Poly<Rational>>>;

// delta_kappa on a word table: entry r yields the entries kappa r u_j,
// j = 1..N, each with data delta_kappa_cell(..., j).
DataTable delta_kappa(const std::vector<AffineMap<Rational>>& maps, const Rational& s, int kappa,
                      const DataTable& table);

struct FilterBank {
  std::string figure;
  int kappa = 2, degree = 1;
  Rational s;
  size_t dim_A = 0, dim_B = 0;
  std::vector<std::string> words;          // generator words of r_i in the walls of Delta ("e" = identity)
  std::vector<AffineMap<Rational>> elements;  // r_i
  std::vector<Mat<double>> P;  // |A| x |A|
  std::vector<Mat<double>> Q;  // |B| x |A|
};

using CoefficientTable = ElementTable<std::vector<double>>;

struct Decomposition {
  CoefficientTable coarse;  // coefficients on the coarse translates
  CoefficientTable detail;
};

class CoxeterMRA {
 public:
  explicit CoxeterMRA(MRAConfig config);

  const MRAConfig& config() const { return config_; }
  const FoldableFigure<Rational>& figure() const { return figure_; }
  const Subdivision<Rational>& subdivision() const { return sub_; }
  const FoldableFigure<Rational>& delta() const { return sub_.delta; }
  size_t cells() const { return sub_.size(); }
  DimensionCount dimensions() const;

  // Exact basis of the continuous data space (null-space vectors in the
  // coordinates of data_vector) and the corresponding surfaces.
  const std::vector<std::vector<Rational>>& data_basis() const { return basis_; }
  const std::vector<SurfaceSpec>& basis_specs() const { return specs_; }
  const Mat<Rational>& gram_exact() const { return gram_; }

  // phi^a = sum_k C(a, k) e_k.
  const Mat<double>& scaling_coefficients() const { return C_; }
  const FilterBank& filter_bank() const { return bank_; }

  // Values at a point of Delta (exact data, float combination).
  std::vector<double> phi(const Vec<Rational>& x, int depth = 40) const;
  std::vector<double> psi(const Vec<Rational>& x, int depth = 40) const;

  // Gram(Phi) from the exact Gram matrix.
  Mat<double> gram_phi() const;
  // <psi^b, psi^b'> and <psi^b, phi^a>, with psi^b = Q(r_i) Phi o u_i^{-1}
  // on Delta_i; the cross products use moments of the surfaces rather
  // than the refinement matrices.
  Mat<double> gram_psi() const;
  Mat<double> cross_gram() const;  // |B| x |A|

  // max |Phi(y) - P(r_i) Phi(u_i^{-1} y)| over the vertices y of the
  // depth-`depth` mesh lying in Delta_i.
  double refinement_residual(int depth) const;
  // <phi^c, phi^a o u_i> from moments, for comparison with P(r_i)(a, c).
  Mat<double> refinement_inner_products(size_t i) const;

  // ||g - proj_{V_k} g||^2 on Delta for a polynomial g, exact up to the
  // normalizers.
  double projection_error(const Poly<Rational>& g, int level) const;
  // Coefficients <g, phi^a o r> for the translates r in `elements`.
  CoefficientTable project(const Poly<Rational>& g, const std::vector<AffineMap<Rational>>& elements) const;

  // Cells r^{-1}(Delta) meeting the region: their elements r.
  std::vector<AffineMap<Rational>> translates(const Box<Rational>& region) const;

  // One level of decomposition V_0 = V_{-1} + W_{-1} and its inverse.
  Decomposition analyze(const CoefficientTable& fine) const;
  CoefficientTable synthesize(const Decomposition& d) const;

 private:
  std::vector<double> phi_from_values(const std::vector<Rational>& basis_values) const;
  std::vector<std::vector<Rational>> basis_moments(int max_degree) const;

  MRAConfig config_;
  FoldableFigure<Rational> figure_;
  Subdivision<Rational> sub_;
  std::vector<std::vector<Rational>> basis_;
  std::vector<SurfaceSpec> specs_;
  std::vector<FractalSurface> surfaces_;
  Mat<Rational> gram_;
  Mat<double> C_;
  std::vector<AffineMap<Rational>> r_;      // r_i = u_i^{-1} o (x / kappa)
  std::vector<AffineMap<Rational>> u_inv_;  // u_i^{-1}
  FilterBank bank_;
};

// JSON exchange: {figure, kappa, degree, s, dim_A, dim_B, words, elements,
// P, Q} with row-major matrices.
std::string filter_bank_to_json(const FilterBank& fb);
FilterBank filter_bank_from_json(const std::string& text);

}  // namespace cwave

// One-dimensional fractal interpolation: iterated function systems on a
// graph, the Read-Bajraktarevic operator and its fixed points, cardinal
// bases, exact Gram matrices and orthonormalization.
//
// A fractal function on Omega = [lo, hi] is stored as a triple
// (u_i, lambda_i, s_i): affine contractions u_i partitioning Omega, data
// polynomials lambda_i and scalings |s_i| < 1.  It is the unique bounded
// solution of
//     f(u_i(t)) = lambda_i(t) + s_i f(t),   t in Omega, i = 1..N.
// All arithmetic is exact (Rational) unless a function says otherwise.
#pragma once

#include "cwave/linalg.hpp"
#include "cwave/poly.hpp"

#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cwave {

// x -> a x + b on the line.
struct Affine1 {
  Rational a{1}, b{0};
  Rational operator()(const Rational& x) const { return a * x + b; }
  double operator()(double x) const { return to_double(a) * x + to_double(b); }
  Rational inverse(const Rational& y) const { return (y - b) / a; }
};

enum class PartitionMode { Translation, Reflection };

// Coefficients of T_i(x, y) = (a_i x + alpha_i, c_i x + s_i y + beta_i).
struct GraphMap {
  Rational a, c, s, alpha, beta;
  Vec<double> apply(const Vec<double>& p) const;
  AffineMap<double> as_affine() const;
};

struct IFS1D {
  Rational lo, hi;
  std::vector<Rational> x, y;  // knots x_0 < ... < x_N and values
  std::vector<Rational> s;     // s_1..s_N
  std::vector<GraphMap> maps;  // T_1..T_N
  PartitionMode mode = PartitionMode::Translation;
};

// Exact coefficients of the graph maps interpolating (x_j, y_j).
// Throws std::invalid_argument for non-increasing knots or |s_i| >= 1.
IFS1D coefficients_from_interpolation(const std::vector<std::pair<Rational, Rational>>& points,
                                      const std::vector<Rational>& s);

// One step of the Hutchinson operator: the union of T_i(S).
std::vector<Vec<double>> hutchinson_step(const std::vector<AffineMap<double>>& maps,
                                         const std::vector<Vec<double>>& points);

// Hausdorff distance between finite planar sets in the metric
// d(p, q) = |p_x - q_x| + theta |p_y - q_y|.
double hausdorff(const std::vector<Vec<double>>& a, const std::vector<Vec<double>>& b, double theta = 1.0);

// A metric in which the graph maps are contractions: returns (theta, q) with
// d(T_i p, T_i q) <= q d(p, q) in the metric above, q < 1.
std::pair<double, double> contraction_metric(const IFS1D& ifs);

// u_i on [0, N]: translation mode u_i(x) = x/N + i - 1; reflection mode
// u_1 = x/N and u_i = R_{i-1} o u_{i-1} with R_i(x) = 2i - x.
std::vector<Affine1> build_maps(PartitionMode mode, int n);

// Closed enclosure [mid - rad, mid + rad].
struct Interval {
  double mid = 0, rad = 0;
  double lo() const { return mid - rad; }
  double hi() const { return mid + rad; }
  bool contains(double v, double slack = 0) const { return v >= lo() - slack && v <= hi() + slack; }
};

struct EvalResult {
  bool exact = false;
  Rational value;     // valid when exact
  Interval enclosure; // always valid (rad = 0 when exact)
};

class FractalFunction {
 public:
  FractalFunction() = default;
  // General operator data.  Maps must partition [lo, hi] (checked).
  FractalFunction(Rational lo, Rational hi, std::vector<Affine1> u, std::vector<Poly1<Rational>> lambda,
                  std::vector<Rational> s);
  FractalFunction(const FractalFunction& o);
  FractalFunction& operator=(const FractalFunction& o);

  // The fixed point of the graph IFS (lambda_i(t) = c_i t + beta_i).
  static FractalFunction from_ifs(const IFS1D& ifs);
  // The fractal function with prescribed values at the cell endpoints
  // (knots) for the given maps and scalings; lambda_i is the affine
  // polynomial forced by continuity.
  static FractalFunction interpolating(Rational lo, Rational hi, std::vector<Affine1> u,
                                       const std::vector<Rational>& knot_values, std::vector<Rational> s);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  size_t size() const { return u_.size(); }
  const std::vector<Affine1>& maps() const { return u_; }
  const std::vector<Poly1<Rational>>& lambdas() const { return lambda_; }
  const std::vector<Rational>& scalings() const { return s_; }
  const std::vector<Rational>& knots() const { return knots_; }  // sorted cell endpoints
  double sup_bound() const;  // bound on |f| over Omega

  // Values at lo and hi (exact solve of the endpoint equations).
  Rational value_lo() const { return f_lo_; }
  Rational value_hi() const { return f_hi_; }

  // Exact value after at most `depth` unrollings, otherwise an enclosure.
  // Throws std::out_of_range outside [lo, hi].
  EvalResult evaluate(const Rational& x, int depth = 64) const;
  // Float evaluation by unrolling to the given depth: truncation error
  // <= max|s|^depth * sup_bound.  When some |s_i| exceeds the cell ratio a_i
  // the function is only Hoelder continuous with exponent < 1 and rounding
  // of x is amplified accordingly; use evaluate() for exact values.
  double evaluate_double(double x, int depth = 60) const;

  // Does the fixed point satisfy the continuity conditions at interior knots?
  bool is_continuous() const;

  // Exact samples on the level-L orbit lattice P_L = union u_i(P_{L-1}),
  // P_0 = {lo, hi}.  Points are sorted and distinct.
  std::vector<std::pair<Rational, Rational>> sample_exact(int level) const;
  std::vector<std::pair<double, double>> sample(int level) const;

  // Linear combination (same maps): alpha f + g.
  friend FractalFunction combine(const Rational& alpha, const FractalFunction& f, const FractalFunction& g);

 private:
  void init();
  size_t cell_of(const Rational& x) const;
  Rational lo_{0}, hi_{1};
  std::vector<Affine1> u_;
  std::vector<Poly1<Rational>> lambda_;
  std::vector<Rational> s_;
  std::vector<Rational> knots_;
  Rational f_lo_, f_hi_;
  mutable std::mutex cache_mutex_;
  mutable std::map<Rational, Rational> cache_;
};

// The Read-Bajraktarevic operator restricted to an orbit lattice: grid
// functions g on P_L map to (B g)(x) = lambda_i(u_i^{-1} x) + s_i g(u_i^{-1} x).
class LatticeOperator {
 public:
  LatticeOperator(const FractalFunction& f, int level);
  const std::vector<double>& points() const { return x_; }
  std::vector<double> apply(const std::vector<double>& g) const;
  // max over grid points of |g(x) - (B g)(x)|
  double residual(const std::vector<double>& g) const;

 private:
  std::vector<double> x_;
  std::vector<double> lam_;   // lambda_i(u_i^{-1} x) at each point
  std::vector<double> s_;     // s_i at each point
  std::vector<size_t> pre_;   // index of u_i^{-1} x
};

struct FractalBasis {
  std::vector<FractalFunction> e;  // cardinal: e_i(knot_j) = delta_ij
  std::vector<Rational> knots;
};

// Cardinal basis for the given maps and scalings.
FractalBasis cardinal_basis(Rational lo, Rational hi, const std::vector<Affine1>& u, const std::vector<Rational>& s);

// Exact integrals.  Throw std::domain_error when the recursion is singular.
std::vector<Rational> moments(const FractalFunction& f, int max_power);  // int f x^m, m = 0..max_power
Rational inner_product(const FractalFunction& f, const FractalFunction& g);

enum class GramMethod { MomentRecursion, Quadrature };

struct GramResult {
  Mat<double> gram;
  Mat<Rational> exact;  // filled for the moment recursion
  GramMethod method_used = GramMethod::MomentRecursion;
  std::string warning;  // set when the recursion fell back to quadrature
};

// Composite midpoint quadrature of int f g over the level-`depth` cells,
// with one Richardson step removing the leading error term.
double quadrature_inner_product(const FractalFunction& f, const FractalFunction& g, int depth);

GramResult gram_matrix(const std::vector<FractalFunction>& basis, GramMethod method, int depth = 12);

// Named fixtures:
//   "ex3.3"                     graph IFS through (0,0), (1/2,7/10), (1,0), s = (3/5, 2/5)
//   "ex3.5-translation"         N = 3 on [0,3], s = 1/2, u_i(x) = x/3 + i - 1,
//                               lambda = ((1/3 - s/2)x, (-1/6 - s/2)x + 1, (1/3 - s/2)x + 1/2)
//   "ex3.5-reflection"          reflection-generated maps, lambda =
//                               ((1/3 - s/2)x, (1/6 - s/2)x + 1/2, (1/3 - s/2)x + 1/2)
//   "ex3.5-reflection-literal"  as above with the middle constant 1, which is
//                               discontinuous at x = 1 (kept for comparison)
// std::invalid_argument for unknown names.
FractalFunction fif_fixture(const std::string& name);
std::vector<std::string> fif_fixture_names();

// Upper-triangular Q with Q^T G Q = I (Gram-Schmidt in the G inner product).
// Throws std::domain_error if G is not positive definite.
Mat<double> orthonormalize(const Mat<double>& gram);

}  // namespace cwave

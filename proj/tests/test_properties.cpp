// Randomized invariants, 500 cases per suite, deterministic seed.
#include "cwave/fif.hpp"
#include "cwave/wavelet_sets.hpp"

#include "doctest.h"
#include "random_inputs.hpp"

#include <cmath>

using namespace cwave;
using namespace cwave::testing;

using Q = Rational;
using VQ = Vec<Rational>;

namespace {

constexpr int kCases = 500;

VQ random_lattice_shift(size_t dim, long range) {
  VQ t(dim);
  for (size_t i = 0; i < dim; ++i) t[i] = Q(2 * uniform_int(-range, range));
  return t;
}

IFS1D random_ifs() {
  int n = static_cast<int>(uniform_int(2, 5));
  std::vector<std::pair<Q, Q>> pts;
  Q x = 0;
  for (int j = 0; j <= n; ++j) {
    pts.emplace_back(x, dyadic(-2, 2, 8));
    x += Q(uniform_int(1, 4), 4);
  }
  std::vector<Q> s;
  for (int i = 0; i < n; ++i) s.push_back(dyadic(-1, 1, 16) * Q(15, 16));
  return coefficients_from_interpolation(pts, s);
}

}  // namespace

TEST_CASE("property: affine reflections are involutions and fold is consistent") {
  auto C = square_C();
  for (int trial = 0; trial < kCases; ++trial) {
    VQ r{dyadic(-3, 3, 4), dyadic(-3, 3, 4)};
    if (r == VQ{0, 0}) r = VQ{0, 1};
    Q k = dyadic(-4, 4, 4);
    VQ x{dyadic(-6, 6, 8), dyadic(-6, 6, 8)};
    auto rho = affine_reflection(r, k);
    CHECK(rho(rho(x)) == x);
    CHECK(is_isometry(rho));
    CHECK(determinant(rho.linear()) == -1);
    // The fixed hyperplane <r, x> = k.
    VQ p = (k / dot(r, r)) * r;
    CHECK(rho(p) == p);

    Vec<Scalar> y{Scalar::pi(dyadic(-9, 9, 8)), Scalar::pi(dyadic(-9, 9, 8))};
    auto [z, w] = fold(C, y);
    CHECK(C.contains(z));
    CHECK(w.iso(z) == y);
  }
}

TEST_CASE("property: measures of box-set operations") {
  for (int trial = 0; trial < kCases; ++trial) {
    size_t dim = trial % 3 == 0 ? 1 : 2;
    auto A = random_box_set(dim, 4), B = random_box_set(dim, 4);
    Q a = A.measure_coeff(), b = B.measure_coeff();
    Q u = A.unite(B).measure_coeff(), i = A.intersect(B).measure_coeff();
    CHECK(u + i == a + b);
    CHECK(A.subtract(B).measure_coeff() == a - i);
    CHECK(A.subtract(B).unite(A.intersect(B)).same_set(A));
    CHECK(A.intersect(B).subset_of(A));
    CHECK(A.subset_of(A.unite(B)));
    CHECK(A.canonical().same_set(A));
    CHECK(A.canonical().measure_coeff() == a);
    CHECK(A.intersects(B) == (i > 0));
    // Rigid motions preserve measure; scaling by c multiplies it by |c|^n.
    VQ t = random_lattice_shift(dim, 3);
    CHECK(A.translate(t).measure_coeff() == a);
    CHECK(A.mirror(0).measure_coeff() == a);
    Q c = dyadic(1, 3, 4);
    Q cn = dim == 1 ? c : c * c;
    CHECK(A.scale(c).measure_coeff() == cn * a);
    // Point membership agrees with the boxes.
    VQ x(dim);
    for (size_t d = 0; d < dim; ++d) x[d] = dyadic(-2, 2, 8);
    CHECK(A.unite(B).contains(x) == (A.contains(x) || B.contains(x)));
    CHECK(A.intersect(B).contains(x) == (A.contains(x) && B.contains(x)));
  }
}

TEST_CASE("property: congruence certificates are sound") {
  auto lat1 = lattice_2pi(1), lat2 = lattice_2pi(2), W = square_weyl(), dil = dyadic_dilations(1);
  auto C1 = cube_C(1), C2 = cube_C(2), shell = dilation_shell(1);
  for (int trial = 0; trial < kCases; ++trial) {
    CongruenceCertificate cert;
    DyadicBoxSet S, T;
    const GroupSpec* g = nullptr;
    switch (trial % 4) {
      case 0:
        S = random_box_set(1, 4, -4, 4);
        T = C1;
        g = &lat1;
        cert = translation_congruent(S, T, *g);
        break;
      case 1:
        S = random_box_set(2, 3, -3, 3);
        T = C2;
        g = &lat2;
        cert = translation_congruent(S, T, *g);
        break;
      case 2:
        S = random_box_set(2, 3, -3, 3);
        T = C2;
        g = &W;
        cert = weyl_congruent(S, *g);
        break;
      default: {
        S = random_box_set(1, 3, 1, 8).unite(random_box_set(1, 2, -8, -1));
        T = shell;
        g = &dil;
        cert = dilation_congruent(S, T, *g);
      }
    }
    auto check = verify_certificate(cert, S, T, *g);
    CHECK(check.ok);
    if (g->kind != GroupKind::Dilation) {
      // Measure-preserving groups: what is placed is the same on both sides.
      CHECK(S.measure() - cert.residual_measure() == T.measure() - cert.uncovered_measure());
    }
    // The residual cannot be placed anywhere in the uncovered part by a
    // single candidate element (greedy maximality).
    if (!cert.residual.empty() && !cert.uncovered.empty() && g->kind != GroupKind::Dilation) {
      for (auto& e : g->candidates(cert.residual.bounding_box(), cert.uncovered.bounding_box()))
        CHECK_FALSE(cert.residual.transform(e).intersects(cert.uncovered));
    }
  }
}

TEST_CASE("property: congruence is an equivalence relation") {
  auto lat = lattice_2pi(2);
  for (int trial = 0; trial < kCases; ++trial) {
    auto S = random_box_set(2, 3, -1, 1);
    // Reflexive.
    auto self = translation_congruent(S, S, lat);
    CHECK(self.congruent());
    CHECK(verify_certificate(self, S, S, lat).ok);
    // T: each box of S moved by its own lattice vector; the images cannot
    // collide because the shifts are 4pi apart.
    DyadicBoxSet T(2), U(2);
    long slot = 0;
    for (auto& b : S.boxes()) {
      VQ t{Q(4 * slot), Q(2 * uniform_int(-2, 2))};
      T = T.unite(DyadicBoxSet::from_disjoint(2, {b}).translate(t));
      ++slot;
    }
    U = T.translate(random_lattice_shift(2, 3));
    auto st = translation_congruent(S, T, lat);
    auto tu = translation_congruent(T, U, lat);
    REQUIRE(st.congruent());
    REQUIRE(tu.congruent());
    // Symmetric.
    auto ts = invert_certificate(st);
    CHECK(ts.congruent());
    CHECK(verify_certificate(ts, T, S, lat).ok);
    // Transitive.
    auto su = compose_certificates(st, tu);
    CHECK(su.congruent());
    CHECK(verify_certificate(su, S, U, lat).ok);
  }
}

TEST_CASE("property: Hutchinson and Read-Bajraktarevic operators contract") {
  for (int trial = 0; trial < kCases; ++trial) {
    IFS1D ifs = random_ifs();
    auto [theta, q] = contraction_metric(ifs);
    CHECK(q < 1);
    std::vector<AffineMap<double>> maps;
    for (auto& m : ifs.maps) maps.push_back(m.as_affine());
    auto random_points = [&] {
      std::vector<Vec<double>> pts;
      for (int k = 0; k < 6; ++k)
        pts.push_back(Vec<double>{uniform_real(to_double(ifs.lo), to_double(ifs.hi)), uniform_real(-3, 3)});
      return pts;
    };
    auto A = random_points(), B = random_points();
    double before = hausdorff(A, B, theta);
    double after = hausdorff(hutchinson_step(maps, A), hutchinson_step(maps, B), theta);
    CHECK(after <= q * before + 1e-12);

    // On functions: ||B g - B h||_inf <= max |s_i| ||g - h||_inf.
    FractalFunction f = FractalFunction::from_ifs(ifs);
    LatticeOperator op(f, 2);
    std::vector<double> g(op.points().size()), h(op.points().size());
    for (auto& v : g) v = uniform_real(-2, 2);
    for (auto& v : h) v = uniform_real(-2, 2);
    auto Bg = op.apply(g), Bh = op.apply(h);
    double smax = 0, d0 = 0, d1 = 0;
    for (auto& s : ifs.s) smax = std::max(smax, std::fabs(to_double(s)));
    for (size_t k = 0; k < g.size(); ++k) {
      d0 = std::max(d0, std::fabs(g[k] - h[k]));
      d1 = std::max(d1, std::fabs(Bg[k] - Bh[k]));
    }
    CHECK(d1 <= smax * d0 + 1e-12);
  }
}

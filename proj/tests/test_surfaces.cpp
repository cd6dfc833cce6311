#include "cwave/surfaces.hpp"

#include "doctest.h"
#include "random_inputs.hpp"

#include <cmath>

using namespace cwave;
using namespace cwave::testing;

using Q = Rational;
using VQ = Vec<Rational>;

namespace {

// The subcell u_i(Delta) containing x (first match), by pulling back.
std::optional<size_t> cell_containing(const SurfaceSpec& spec, const VQ& x) {
  for (size_t i = 0; i < spec.size(); ++i)
    if (spec.delta.contains(spec.maps[i].inverse()(x))) return i;
  return std::nullopt;
}

SurfaceSpec with_constant_data(SurfaceSpec spec, const Q& c) {
  for (auto& l : spec.lambda) l = Poly<Q>::constant(2, c);
  return spec;
}

}  // namespace

TEST_CASE("face conditions of the triangle fixture") {
  SurfaceSpec spec = fixture_triangle_surface();
  CHECK(spec.s == Q(3, 5));
  CHECK(spec.size() == 4);
  ConditionReport rep = validate_condition_star(spec);
  CHECK(rep.ok);
  CHECK(rep.violations.empty());
  CHECK(rep.constraints_checked > 0);

  // Changing the constant term of lambda_3 to 1 breaks continuity; the faces
  // reported all involve the third subcell.
  SurfaceSpec bad = spec;
  bad.lambda[2] = Poly<Q>::affine(Q(1), VQ{Q(1, 5), Q(-3, 10)});
  ConditionReport r2 = validate_condition_star(bad);
  CHECK_FALSE(r2.ok);
  REQUIRE_FALSE(r2.violations.empty());
  for (auto& v : r2.violations) CHECK((v.i == 3 || v.j == 3));
  CHECK_THROWS_AS(fixed_point(bad), std::invalid_argument);

  // Identical constants are always admissible.
  CHECK(validate_condition_star(with_constant_data(spec, Q(2, 7))).ok);
}

TEST_CASE("fixed point of the triangle fixture") {
  SurfaceSpec spec = fixture_triangle_surface();
  FractalSurface f = fixed_point(spec);
  for (auto& z : f.delta_vertex_values()) CHECK(z == 0);

  // Direct unrolling: x = u_i(V) for a vertex V of Delta gives
  // f(x) = lambda_i(V) + s f(V) = lambda_i(V).
  for (size_t i = 0; i < spec.size(); ++i)
    for (auto& V : spec.delta.vertices) {
      EvalResult r = f.evaluate(spec.maps[i](V));
      REQUIRE(r.exact);
      CHECK(r.value == spec.lambda[i](V));
    }
  CHECK(f.evaluate(VQ{Q(1, 2), 0}).value == Q(1, 5));
  CHECK(f.evaluate(VQ{Q(1, 2), Q(1, 2)}).value == Q(1, 2));
  CHECK(f.evaluate(VQ{0, Q(1, 2)}).value == Q(3, 10));

  // No disagreement between neighbouring cells on the refined mesh.
  Q jump;
  auto table = f.vertex_table(5, &jump);
  CHECK(jump == 0);
  // Fixed-point identity at the mesh vertices.
  auto coarse = f.vertex_table(4);
  for (auto& [x, z] : coarse)
    for (size_t i = 0; i < spec.size(); ++i) {
      VQ y = spec.maps[i](x);
      REQUIRE(table.count(y));
      CHECK(table.at(y) == spec.lambda[i](x) + spec.s * z);
    }
}

TEST_CASE("s = 0 gives the polynomial patchwork") {
  SurfaceSpec spec = fixture_triangle_surface();
  spec.s = 0;
  FractalSurface f(spec);
  for (int trial = 0; trial < 50; ++trial) {
    // A random point of Delta (barycentric, dyadic).
    Q a = dyadic(0, 1, 16), b = dyadic(0, 1, 16);
    if (a + b > 1) a = 1 - a, b = 1 - b;
    VQ z{a, b};
    size_t i = static_cast<size_t>(uniform_int(0, 3));
    EvalResult r = f.evaluate(spec.maps[i](z));
    REQUIRE(r.exact);
    CHECK(r.value == spec.lambda[i](z));
  }
}

TEST_CASE("continuity across faces at random face points") {
  SurfaceSpec spec = fixture_triangle_surface();
  FractalSurface f = fixed_point(spec);
  // Common faces: pairs of subcells sharing an edge.
  int checked = 0;
  for (int trial = 0; trial < 4000 && checked < 100; ++trial) {
    size_t i = static_cast<size_t>(uniform_int(0, 3)), j = static_cast<size_t>(uniform_int(0, 3));
    if (i == j) continue;
    // A random point on an edge of Delta_i; keep it if it also lies in Delta_j.
    size_t e = static_cast<size_t>(uniform_int(0, 2));
    Q t = dyadic(0, 1, 1024);
    VQ p = spec.delta.vertices[e], q = spec.delta.vertices[(e + 1) % 3];
    VQ x = spec.maps[i](p + t * (q - p));
    VQ yj = spec.maps[j].inverse()(x);
    if (!spec.delta.contains(yj)) continue;
    VQ yi = spec.maps[i].inverse()(x);
    double from_i = to_double(spec.lambda[i](yi)) + to_double(spec.s) * f.evaluate_double(convert<double>(yi));
    double from_j = to_double(spec.lambda[j](yj)) + to_double(spec.s) * f.evaluate_double(convert<double>(yj));
    CHECK(std::fabs(from_i - from_j) <= 1e-9);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("operator iteration contracts by s on the mesh") {
  SurfaceSpec spec = fixture_triangle_surface();
  FractalSurface f = fixed_point(spec);
  auto table = f.vertex_table(6);
  std::map<VQ, double> g, next;
  for (auto& [x, z] : table) g[x] = 0;
  // Precompute the cell and preimage of every vertex.
  std::map<VQ, std::pair<size_t, VQ>> pre;
  for (auto& [x, z] : table) {
    auto i = cell_containing(spec, x);
    REQUIRE(i);
    pre[x] = {*i, spec.maps[*i].inverse()(x)};
  }
  double prev = -1;
  for (int it = 0; it < 12; ++it) {
    double diff = 0;
    for (auto& [x, z] : table) {
      auto& [i, y] = pre[x];
      next[x] = to_double(spec.lambda[i](y)) + to_double(spec.s) * g.at(y);
      diff = std::max(diff, std::fabs(next[x] - g[x]));
    }
    if (prev > 0) CHECK(diff <= 0.6 * prev + 1e-15);
    prev = diff;
    g.swap(next);
  }
  // The iterate approaches the exact fixed point.
  double err = 0;
  for (auto& [x, z] : table) err = std::max(err, std::fabs(g[x] - to_double(z)));
  CHECK(err <= std::pow(0.6, 12) * f.sup_bound() + 1e-12);
}

TEST_CASE("basis surfaces") {
  SurfaceSpec spec = fixture_triangle_surface();
  BasisFamily fam = basis_surfaces(spec);
  REQUIRE(fam.specs.size() == 6);  // three outer and three inner vertices
  for (auto& r : fam.reports) CHECK(r.ok);

  std::vector<FractalSurface> phi;
  for (auto& s : fam.specs) phi.emplace_back(s);
  // Cardinality.
  for (size_t a = 0; a < phi.size(); ++a)
    for (size_t b = 0; b < fam.vertices.size(); ++b)
      CHECK(phi[a].evaluate(fam.vertices[b]).value == (a == b ? 1 : 0));

  // f = sum z_v phi_v with z the fixture's vertex values.
  FractalSurface f = fixed_point(spec);
  std::vector<Q> z;
  for (auto& v : fam.vertices) z.push_back(f.evaluate(v).value);
  auto table = f.vertex_table(4);
  std::vector<std::map<VQ, Q>> tables;
  for (auto& p : phi) tables.push_back(p.vertex_table(4));
  for (auto& [x, value] : table) {
    Q sum = 0, ones = 0;
    for (size_t a = 0; a < phi.size(); ++a) {
      sum += z[a] * tables[a].at(x);
      ones += tables[a].at(x);
    }
    CHECK(sum == value);
    if (std::find(fam.vertices.begin(), fam.vertices.end(), x) != fam.vertices.end()) CHECK(ones == 1);
  }
}

TEST_CASE("dimension of the continuous affine data space") {
  SurfaceSpec spec = fixture_triangle_surface();
  auto cons = continuity_constraints(spec.delta, spec.maps, spec.s, 1, 2);
  size_t unknowns = spec.size() * monomial_exponents(2, 1).size();
  Mat<Q> m(cons.rows.size(), unknowns);
  for (size_t r = 0; r < cons.rows.size(); ++r)
    for (size_t c = 0; c < unknowns; ++c) m(r, c) = cons.rows[r][c];
  CHECK(null_space(m).size() == 6);
  // The fixture's data satisfies every constraint.
  auto x = data_vector(spec);
  for (auto& row : cons.rows) {
    Q dotp = 0;
    for (size_t c = 0; c < unknowns; ++c) dotp += row[c] * x[c];
    CHECK(dotp == 0);
  }
}

TEST_CASE("linearity of data to surface") {
  SurfaceSpec a = fixture_triangle_surface();
  BasisFamily fam = basis_surfaces(a);
  SurfaceSpec b = fam.specs[3];
  Q alpha(-5, 3);
  SurfaceSpec mix = a;
  for (size_t i = 0; i < mix.size(); ++i) mix.lambda[i] = alpha * a.lambda[i] + b.lambda[i];
  auto ta = FractalSurface(a).vertex_table(3), tb = FractalSurface(b).vertex_table(3),
       tm = FractalSurface(mix).vertex_table(3);
  for (auto& [x, v] : tm) CHECK(v == alpha * ta.at(x) + tb.at(x));
}

TEST_CASE("refined basis") {
  SurfaceSpec spec = fixture_triangle_surface();
  BasisFamily fam = basis_surfaces(spec);
  std::vector<FractalSurface> phi;
  for (auto& s : fam.specs) phi.emplace_back(s);
  FractalSurface f = fixed_point(spec);
  std::vector<Q> z;
  for (auto& v : fam.vertices) z.push_back(f.evaluate(v).value);

  auto same = refine_basis({}, phi);
  REQUIRE(same.size() == phi.size());
  for (size_t a = 0; a < phi.size(); ++a)
    for (auto& v : fam.vertices) CHECK(same[a].evaluate(v).value == phi[a].evaluate(v).value);

  // u_1^# phi restricted to Delta_1 reproduces f there.
  auto refined = refine_basis({0}, phi);
  for (auto& V : spec.delta.vertices) {
    VQ x = spec.maps[0](V);
    Q sum = 0;
    for (size_t a = 0; a < refined.size(); ++a) sum += z[a] * refined[a].evaluate(x).value;
    CHECK(sum == f.evaluate(x).value);
  }
  // Linear independence: the mesh Gram matrix is positive definite.
  std::vector<std::vector<MeshCell>> meshes;
  for (auto& r : refined) meshes.push_back(r.mesh(4));
  Mat<double> gram(refined.size(), refined.size());
  for (size_t a = 0; a < refined.size(); ++a)
    for (size_t b = 0; b < refined.size(); ++b) gram(a, b) = mesh_inner_product(meshes[a], meshes[b]);
  CHECK_NOTHROW(orthonormalize(gram));
  CHECK(determinant(gram) > 0);
}

TEST_CASE("exact integrals against mesh quadrature") {
  SurfaceSpec spec = fixture_triangle_surface();
  BasisFamily fam = basis_surfaces(spec);
  // The piecewise-linear mesh converges to the exact value, with an error
  // that decays roughly like s^depth for these rough surfaces.
  for (size_t a = 0; a < 3; ++a) {
    double exact = to_double(surface_inner_product(fam.specs[a], fam.specs[a]));
    auto m4 = FractalSurface(fam.specs[a]).mesh(4), m7 = FractalSurface(fam.specs[a]).mesh(7);
    double e4 = std::fabs(mesh_inner_product(m4, m4) - exact), e7 = std::fabs(mesh_inner_product(m7, m7) - exact);
    CHECK(e7 <= 0.5 * e4);
    CHECK(e7 <= 0.1 * exact);
  }
  // Area of the triangle.
  CHECK(polygon_integral(Poly<Q>::constant(2, 1), right_triangle().vertices) == Q(1, 2));
}

TEST_CASE("global extension") {
  SurfaceSpec spec = fixture_triangle_surface();
  FractalSurface f = fixed_point(spec);
  GlobalSurface g = GlobalSurface::constant(spec);
  for (int trial = 0; trial < 100; ++trial) {
    VQ x{dyadic(-3, 3, 64) + Q(1, 1024), dyadic(-3, 3, 64) + Q(1, 2048)};
    auto [y, w] = fold(spec.delta, x);
    auto v = g.evaluate(x);
    if (!spec.delta.strictly_contains(y)) {
      CHECK_FALSE(v.has_value());
      continue;
    }
    REQUIRE(v.has_value());
    CHECK(std::fabs(*v - f.evaluate_double(convert<double>(y), 40)) <= 1e-9);
  }
  CHECK_FALSE(g.evaluate(VQ{0, Q(1, 5)}).has_value());  // on the wall x = 0

  // Four cells with four different data sets.
  Box<Q> region{VQ{Q(-1, 2), Q(-1, 2)}, VQ{Q(1, 2), Q(1, 2)}};
  auto cells = enumerate_group(spec.delta, region);
  REQUIRE(cells.size() == 4);
  std::map<std::string, SurfaceSpec> table;
  for (size_t k = 0; k < cells.size(); ++k) {
    SurfaceSpec s = spec;
    for (auto& l : s.lambda) l = Q(static_cast<long>(k + 1)) * l;
    table[element_key(cells[k].element.iso)] = s;
  }
  GlobalSurface stitched = extend_global(spec.delta, table, region);
  for (size_t k = 0; k < cells.size(); ++k) {
    auto& r = cells[k].element.iso;
    VQ inner{Q(1, 5), Q(1, 7)};  // interior point of Delta
    auto v = stitched.evaluate(r(inner));
    REQUIRE(v.has_value());
    CHECK(std::fabs(*v - (k + 1) * f.evaluate_double(convert<double>(inner), 40)) <= 1e-9);
  }
  table.erase(table.begin());
  CHECK_THROWS_AS(extend_global(spec.delta, table, region), std::out_of_range);
}

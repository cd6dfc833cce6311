#include "cwave/reflections.hpp"
#include "cwave/surfaces.hpp"

#include "doctest.h"
#include "random_inputs.hpp"

#include <set>

using namespace cwave;
using namespace cwave::testing;

using VQ = Vec<Rational>;
using VS = Vec<Scalar>;

TEST_CASE("linear reflections") {
  CHECK(reflect_root(VQ{1, 0}, VQ{3, 2}) == VQ{-3, 2});
  CHECK(reflect_root(VQ{1, 1}, VQ{1, 1}) == VQ{-1, -1});
  CHECK(reflect_root(VQ{1, 1}, VQ{1, -1}) == VQ{1, -1});
  CHECK_THROWS_AS(reflect_root(VQ{0, 0}, VQ{1, 2}), std::invalid_argument);
}

TEST_CASE("affine reflections") {
  VQ x{3, 2};
  CHECK(affine_reflect(VQ{1, 0}, Rational(0), x) == reflect_root(VQ{1, 0}, x));
  CHECK(affine_reflect(VQ{1, 0}, Rational(1), x) == VQ{-1, 2});
  CHECK(affine_reflect(VQ{0, 1}, Rational(2), VQ{0, 5}) == VQ{0, -1});
  CHECK_THROWS_AS(affine_reflect(VQ{0, 0}, Rational(1), x), std::invalid_argument);
  // rho_{r,k} = rho_r + k r^vee, and <r^vee, r> = 2.
  VQ r{1, 2};
  CHECK(dot(coroot(r), r) == 2);
  CHECK(affine_reflect(r, Rational(3), x) == reflect_root(r, x) + Rational(3) * coroot(r));
  CHECK(affine_reflection(r, Rational(3))(x) == affine_reflect(r, Rational(3), x));
}

TEST_CASE("affine reflections are involutions fixing their hyperplane") {
  for (int trial = 0; trial < 200; ++trial) {
    VQ r{dyadic(-3, 3, 4), dyadic(-3, 3, 4)};
    if (r == VQ{0, 0}) r = VQ{1, 0};
    Rational k = dyadic(-4, 4, 3);
    VQ x{dyadic(-5, 5, 7), dyadic(-5, 5, 7)};
    CHECK(affine_reflect(r, k, affine_reflect(r, k, x)) == x);
    // A point of H_{r,k}: k r / <r,r>.
    VQ p = (k / dot(r, r)) * r;
    CHECK(affine_reflect(r, k, p) == p);
  }
}

TEST_CASE("root system validation") {
  RootSystem<Rational> single{{VQ{1, 0}}, {true}};
  CHECK_FALSE(single.validate().ok);
  RootSystem<Rational> a1a1{{VQ{1, 0}, VQ{-1, 0}, VQ{0, 1}, VQ{0, -1}}, {true, false, true, false}};
  CHECK(a1a1.validate().ok);
  RootSystem<Rational> multiples{{VQ{1, 0}, VQ{-1, 0}, VQ{2, 0}, VQ{-2, 0}, VQ{0, 1}, VQ{0, -1}},
                                 {true, false, true, false, true, false}};
  CHECK_FALSE(multiples.validate().ok);
}

TEST_CASE("Klein four-group") {
  KleinFour k = klein_four_group();
  CHECK(k.roots.validate().ok);
  CHECK(k.elements.size() == 4);
  auto& r1 = k.generators[0];
  auto& r2 = k.generators[1];
  auto id = AffineMap<Rational>::identity(2);
  CHECK(compose(r1, r1) == id);
  CHECK(compose(r2, r2) == id);
  auto p = compose(r1, r2);
  CHECK(compose(p, p) == id);
  std::set<VQ> orbit;
  for (auto& g : k.elements) orbit.insert(g(VQ{1, 2}));
  CHECK(orbit == std::set<VQ>{VQ{1, 2}, VQ{-1, 2}, VQ{1, -2}, VQ{-1, -2}});
}

TEST_CASE("built-in figures validate") {
  CHECK(square_C().validate().ok);
  CHECK(quarter_square().validate().ok);
  CHECK(interval_C().validate().ok);
  CHECK(unit_square().validate().ok);
  CHECK(right_triangle().validate().ok);
  CHECK(right_triangle_cell().validate().ok);
  CHECK(right_triangle().volume() == Rational(1, 2));
  CHECK(square_C().volume() == Scalar(4, 2));
}

TEST_CASE("enumerate_group: the figure itself and the 3x3 macro-tiling") {
  auto C = square_C();
  auto own = enumerate_group(C, Box<Scalar>{VS{-Scalar::pi(), -Scalar::pi()}, VS{Scalar::pi(), Scalar::pi()}});
  REQUIRE(own.size() == 1);
  CHECK(own[0].element.iso == AffineMap<Scalar>::identity(2));

  Scalar three_pi = Scalar::pi(3);
  Box<Scalar> region{VS{-three_pi, -three_pi}, VS{three_pi, three_pi}};
  auto cells = enumerate_group(C, region);
  // The walls x, y in pi (2Z + 1) cut [-3pi, 3pi]^2 into 3 x 3 copies of C.
  // (The finer arrangement x, y in pi Z would give 36 cells; see README.)
  CHECK(cells.size() == 9);

  // Partition: the cells' areas inside the region add up to the region's area.
  Scalar total(0);
  for (auto& c : cells) total += clipped_area(c.vertices, region);
  CHECK(total == Scalar(36, 2));

  // Deterministic order: word length, then lexicographic.
  for (size_t k = 1; k < cells.size(); ++k) {
    auto& a = cells[k - 1].element.word;
    auto& b = cells[k].element.word;
    CHECK((a.size() < b.size() || (a.size() == b.size() && a <= b)));
  }
}

TEST_CASE("enumerate_group: unit square tiling and semidirect decomposition") {
  auto F = unit_square();
  Box<Rational> region{VQ{-2, -2}, VQ{2, 2}};
  auto cells = enumerate_group(F, region);
  CHECK(cells.size() == 16);
  std::set<std::string> keys;
  for (auto& c : cells) keys.insert(element_key(c.element.iso));
  CHECK(keys.size() == cells.size());

  auto sd = semidirect_structure(F, 0);
  for (auto& c : cells) {
    auto d = sd.decompose(c.element.iso);
    CHECK(d.w_in_stabilizer);
    CHECK(d.translation_in_lattice);
    CHECK(compose(AffineMap<Rational>::translation(d.translation), d.w) == c.element.iso);
  }
}

TEST_CASE("fold") {
  auto C = square_C();
  VS inside{Scalar::pi(Rational(1, 3)), Scalar::pi(Rational(-1, 2))};
  auto [y0, w0] = fold(C, inside);
  CHECK(y0 == inside);
  CHECK(w0.word.empty());

  VS x{Scalar::pi(Rational(3, 2)), Scalar::pi(Rational(1, 2))};
  auto [y, w] = fold(C, x);
  CHECK(y == VS{Scalar::pi(Rational(1, 2)), Scalar::pi(Rational(1, 2))});
  CHECK(w.word.size() == 1);
  CHECK(w.iso(y) == x);

  for (int trial = 0; trial < 1000; ++trial) {
    VS p{Scalar::pi(dyadic(-9, 9, 16)), Scalar::pi(dyadic(-9, 9, 16))};
    auto [q, word] = fold(C, p);
    CHECK(C.contains(q));
    CHECK(word.iso(q) == p);
  }
}

TEST_CASE("subdivide") {
  auto F = unit_square();
  auto sub = subdivide(F, 2);
  CHECK(sub.size() == 4);
  CHECK_THROWS_AS(subdivide(F, 1), std::invalid_argument);
  // u_1 is the scaling by 1/kappa and carries Delta onto F.
  CHECK(sub.maps[0].linear() == Mat<Rational>{{Rational(1, 2), 0}, {0, Rational(1, 2)}});
  std::set<VQ> image, figure(F.vertices.begin(), F.vertices.end());
  for (auto& v : sub.delta.vertices) image.insert(sub.maps[0](v));
  CHECK(image == figure);
  // Every map has ratio 1/2 and the subcells have the right total area.
  Rational area(0);
  for (auto& u : sub.maps) {
    CHECK(abs_q(determinant(u.linear())) == Rational(1, 4));
    std::vector<VQ> cell;
    for (auto& v : sub.delta.vertices) cell.push_back(u(v));
    area += polygon_area(cell) < 0 ? Rational(-polygon_area(cell)) : polygon_area(cell);
  }
  CHECK(area == sub.delta.volume());
  CHECK(subdivide(F, 3).size() == 9);

  // The triangle fixture's second similitude.
  auto spec = fixture_triangle_surface();
  CHECK(spec.maps[1].linear() == Mat<Rational>{{Rational(-1, 2), 0}, {0, Rational(1, 2)}});
  CHECK(spec.maps[1].shift() == VQ{Rational(1, 2), 0});
}

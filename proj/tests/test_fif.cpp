#include "cwave/fif.hpp"

#include "doctest.h"
#include "random_inputs.hpp"

#include <cmath>
#include <thread>

using namespace cwave;
using namespace cwave::testing;

namespace {

using Points = std::vector<std::pair<Rational, Rational>>;

const Points kThreePoints = {{0, 0}, {Rational(1, 2), Rational(7, 10)}, {1, 0}};
const std::vector<Rational> kThreeScalings = {Rational(3, 5), Rational(2, 5)};

// Independent transcription of the four coefficient formulas.
GraphMap coefficients_by_hand(const Points& p, const std::vector<Rational>& s, size_t i) {
  const Rational a = p.front().first, b = p.back().first, L = b - a;
  const Rational y0 = p.front().second, yN = p.back().second;
  GraphMap m;
  m.a = (p[i].first - p[i - 1].first) / L;
  m.alpha = (b * p[i - 1].first - a * p[i].first) / L;
  m.c = (p[i].second - p[i - 1].second) / L - s[i - 1] * (yN - y0) / L;
  m.beta = (b * p[i - 1].second - a * p[i].second - s[i - 1] * (b * y0 - a * yN)) / L;
  m.s = s[i - 1];
  return m;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t k = 0; k < a.size(); ++k) d = std::max(d, std::fabs(a[k] - b[k]));
  return d;
}

// A random admissible IFS: N <= 5 cells, |s_i| <= 0.8.
IFS1D random_ifs() {
  size_t n = static_cast<size_t>(uniform_int(2, 5));
  Points p;
  Rational x = 0;
  for (size_t j = 0; j <= n; ++j) {
    p.push_back({x, dyadic(-2, 2, 10)});
    x += Rational(uniform_int(1, 4), 4);
  }
  std::vector<Rational> s;
  for (size_t i = 0; i < n; ++i) s.push_back(dyadic(-4, 4, 5) / 5);  // multiples of 1/25 in [-4/5, 4/5]
  return coefficients_from_interpolation(p, s);
}

}  // namespace

TEST_CASE("coefficients of the three-point interpolation example") {
  IFS1D ifs = coefficients_from_interpolation(kThreePoints, kThreeScalings);
  REQUIRE(ifs.maps.size() == 2);
  CHECK(ifs.maps[0].a == Rational(1, 2));
  CHECK(ifs.maps[1].a == Rational(1, 2));
  CHECK(ifs.maps[0].alpha == 0);
  CHECK(ifs.maps[1].alpha == Rational(1, 2));
  CHECK(ifs.maps[0].c == Rational(7, 10));
  CHECK(ifs.maps[1].c == Rational(-7, 10));
  CHECK(ifs.maps[0].beta == 0);
  CHECK(ifs.maps[1].beta == Rational(7, 10));
}

TEST_CASE("coefficients agree with the formulas on random data") {
  for (int trial = 0; trial < 100; ++trial) {
    IFS1D ifs = random_ifs();
    Points p;
    for (size_t j = 0; j < ifs.x.size(); ++j) p.push_back({ifs.x[j], ifs.y[j]});
    for (size_t i = 1; i < p.size(); ++i) {
      GraphMap m = coefficients_by_hand(p, ifs.s, i);
      CHECK(ifs.maps[i - 1].a == m.a);
      CHECK(ifs.maps[i - 1].alpha == m.alpha);
      CHECK(ifs.maps[i - 1].c == m.c);
      CHECK(ifs.maps[i - 1].beta == m.beta);
    }
  }
}

TEST_CASE("degenerate interpolation data") {
  IFS1D zero = coefficients_from_interpolation({{0, 0}, {Rational(1, 3), 0}, {1, 0}}, {0, 0});
  for (auto& m : zero.maps) {
    CHECK(m.c == 0);
    CHECK(m.beta == 0);
  }
  IFS1D line = coefficients_from_interpolation({{0, 0}, {1, 1}}, {0});
  FractalFunction f = FractalFunction::from_ifs(line);
  for (Rational x : {Rational(0), Rational(1, 3), Rational(5, 7), Rational(1)}) CHECK(f.evaluate(x).value == x);

  CHECK_THROWS_AS(coefficients_from_interpolation({{0, 0}, {1, 1}, {Rational(1, 2), 0}}, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(coefficients_from_interpolation(kThreePoints, {1, 0}), std::invalid_argument);
}

TEST_CASE("Hutchinson operator") {
  IFS1D ifs = coefficients_from_interpolation(kThreePoints, kThreeScalings);
  std::vector<AffineMap<double>> maps;
  for (auto& m : ifs.maps) maps.push_back(m.as_affine());

  // The fixed point of T_1 is (0, 0) = (x_0, y_0).
  auto fixed = hutchinson_step({maps[0]}, {Vec<double>{0, 0}});
  REQUIRE(fixed.size() == 1);
  CHECK(fixed[0][0] == doctest::Approx(0));
  CHECK(fixed[0][1] == doctest::Approx(0));

  // The corners of the unit square go to the corners of two parallelograms.
  std::vector<Vec<double>> corners = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto image = hutchinson_step(maps, corners);
  CHECK(image.size() == 8);
  for (size_t i = 0; i < 2; ++i)
    for (size_t k = 0; k < 4; ++k) {
      auto back = maps[i].inverse()(image[i * 4 + k]);
      CHECK(back[0] == doctest::Approx(corners[k][0]));
      CHECK(back[1] == doctest::Approx(corners[k][1]));
    }
  CHECK_THROWS(hutchinson_step(maps, {}));
}

TEST_CASE("evaluation of the three-point example") {
  FractalFunction f = fif_fixture("ex3.3");
  CHECK(f.evaluate(0).value == 0);
  CHECK(f.evaluate(Rational(1, 2)).value == Rational(7, 10));
  CHECK(f.evaluate(1).value == 0);
  CHECK(f.is_continuous());

  // One unrolling: f(1/4) = lambda_1(1/2) + (3/5) f(1/2) with lambda_1(t) = c_1 t + beta_1.
  Rational by_hand = Rational(7, 10) * Rational(1, 2) + Rational(3, 5) * Rational(7, 10);
  EvalResult quarter = f.evaluate(Rational(1, 4));
  REQUIRE(quarter.exact);
  CHECK(quarter.value == by_hand);

  // Operator iteration from zero on the orbit lattice reaches the same value.
  LatticeOperator op(f, 6);
  std::vector<double> g(op.points().size(), 0.0);
  for (int it = 0; it < 60; ++it) g = op.apply(g);
  for (size_t k = 0; k < g.size(); ++k)
    if (op.points()[k] == 0.25) CHECK(g[k] == doctest::Approx(to_double(by_hand)).epsilon(1e-12));

  // Non-orbit points: a certified enclosure.
  EvalResult third = f.evaluate(Rational(1, 3), 30);
  CHECK_FALSE(third.exact);
  CHECK(third.enclosure.rad <= std::pow(0.6, 30) * f.sup_bound() * 1.0000001);
  CHECK(third.enclosure.contains(f.evaluate_double(1.0 / 3), 1e-12));
  CHECK_THROWS_AS(f.evaluate(Rational(3, 2)), std::out_of_range);
}

TEST_CASE("uniform partitions with translation and reflection maps") {
  auto t = build_maps(PartitionMode::Translation, 3);
  CHECK(t[1](Rational(0)) == 1);
  CHECK(t[1](Rational(3)) == 2);
  auto r = build_maps(PartitionMode::Reflection, 3);
  CHECK(r[1](Rational(0)) == 2);
  CHECK(r[1](Rational(3)) == 1);
  for (auto* maps : {&t, &r}) {
    Rational covered = 0;
    for (auto& u : *maps) covered += abs_q(u.a) * 3;
    CHECK(covered == 3);
  }
  CHECK_THROWS_AS(build_maps(PartitionMode::Translation, 1), std::invalid_argument);
}

TEST_CASE("three-cell examples: knot values 0, 1, 1/2, 3/2") {
  const std::vector<Rational> expected = {0, 1, Rational(1, 2), Rational(3, 2)};
  for (const char* name : {"ex3.5-translation", "ex3.5-reflection"}) {
    CAPTURE(name);
    FractalFunction f = fif_fixture(name);
    REQUIRE(f.knots().size() == 4);
    for (size_t j = 0; j < 4; ++j) {
      EvalResult v = f.evaluate(f.knots()[j]);
      REQUIRE(v.exact);
      CHECK(v.value == expected[j]);
    }
    CHECK(f.is_continuous());
  }
  // With the middle constant as printed (1) the reflection-mode fixed point
  // is discontinuous at x = 1: from the left f(1) = 1, from the middle cell
  // f(1) = lambda_2(3) + f(3)/2 = 3/2.
  FractalFunction literal = fif_fixture("ex3.5-reflection-literal");
  CHECK_FALSE(literal.is_continuous());
  CHECK(literal.lambdas()[1](Rational(3)) + literal.value_hi() / 2 == Rational(3, 2));
  CHECK_THROWS_AS(fif_fixture("ex9.9"), std::invalid_argument);
}

TEST_CASE("Gram matrices") {
  // s = 0: hat functions on unit cells.
  auto maps = build_maps(PartitionMode::Translation, 3);
  FractalBasis hats = cardinal_basis(0, 3, maps, {0, 0, 0});
  GramResult g = gram_matrix(hats.e, GramMethod::MomentRecursion);
  CHECK(g.exact(0, 0) == Rational(1, 3));
  CHECK(g.exact(1, 1) == Rational(2, 3));
  CHECK(g.exact(1, 2) == Rational(1, 6));
  CHECK(g.exact(0, 2) == 0);
  CHECK(g.exact == g.exact.transpose());

  for (auto mode : {PartitionMode::Translation, PartitionMode::Reflection}) {
    FractalBasis b = cardinal_basis(0, 3, build_maps(mode, 3), std::vector<Rational>(3, Rational(1, 2)));
    REQUIRE(b.e.size() == 4);
    GramResult exact = gram_matrix(b.e, GramMethod::MomentRecursion);
    GramResult quad = gram_matrix(b.e, GramMethod::Quadrature, 12);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) {
        CHECK(std::fabs(exact.gram(i, j) - quad.gram(i, j)) <= 1e-6);
        CHECK(exact.gram(i, j) == exact.gram(j, i));
      }
    Mat<double> q = orthonormalize(exact.gram);
    Mat<double> id = q.transpose() * exact.gram * q;
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) CHECK(std::fabs(id(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-8);
  }
}

TEST_CASE("orthonormalization") {
  Mat<double> id = Mat<double>::identity(3);
  Mat<double> q = orthonormalize(id);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) CHECK(q(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
  Mat<double> g{{1, 0.5}, {0.5, 1}};
  Mat<double> r = orthonormalize(g);
  Mat<double> check = r.transpose() * g * r;
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j) CHECK(std::fabs(check(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
  CHECK(r(1, 0) == 0);  // upper triangular
  CHECK_THROWS_AS(orthonormalize(Mat<double>{{1, 2}, {2, 1}}), std::domain_error);
}

TEST_CASE("cardinal property, linearity and basis expansion") {
  FractalFunction f = fif_fixture("ex3.3");
  FractalBasis b = cardinal_basis(0, 1, f.maps(), kThreeScalings);
  for (size_t i = 0; i < b.e.size(); ++i)
    for (size_t j = 0; j < b.knots.size(); ++j) CHECK(b.e[i].evaluate(b.knots[j]).value == (i == j ? 1 : 0));

  // f = sum_j y_j e_j on the grid.
  std::vector<Rational> y = {0, Rational(7, 10), 0};
  auto fs = f.sample(8);
  std::vector<std::vector<std::pair<double, double>>> es;
  for (auto& e : b.e) es.push_back(e.sample(8));
  for (size_t k = 0; k < fs.size(); ++k) {
    double sum = 0;
    for (size_t j = 0; j < 3; ++j) sum += to_double(y[j]) * es[j][k].second;
    CHECK(std::fabs(sum - fs[k].second) <= 1e-10);
  }

  // Linearity in the knot data: f_{alpha p + q} = alpha f_p + f_q exactly.
  auto maps = build_maps(PartitionMode::Reflection, 3);
  std::vector<Rational> s(3, Rational(1, 3));
  std::vector<Rational> p = {1, -2, Rational(1, 2), 3}, q = {0, Rational(5, 4), 2, -1};
  Rational alpha(-3, 7);
  std::vector<Rational> mix;
  for (size_t j = 0; j < 4; ++j) mix.push_back(alpha * p[j] + q[j]);
  auto fp = FractalFunction::interpolating(0, 3, maps, p, s);
  auto fq = FractalFunction::interpolating(0, 3, maps, q, s);
  auto fm = FractalFunction::interpolating(0, 3, maps, mix, s);
  auto combined = combine(alpha, fp, fq);
  auto a = fm.sample_exact(5), c = combined.sample_exact(5);
  REQUIRE(a.size() == c.size());
  for (size_t k = 0; k < a.size(); ++k) CHECK(a[k] == c[k]);
}

TEST_CASE("operator iteration contracts and converges on random systems") {
  for (int trial = 0; trial < 25; ++trial) {
    IFS1D ifs = random_ifs();
    FractalFunction f = FractalFunction::from_ifs(ifs);
    double smax = 0;
    for (auto& s : ifs.s) smax = std::max(smax, std::fabs(to_double(s)));
    int level = static_cast<int>(std::floor(std::log(4000.0) / std::log(double(ifs.s.size()))));
    LatticeOperator op(f, level);
    std::vector<double> g(op.points().size(), 0.0), next = op.apply(g);
    double prev = sup_diff(g, next);
    for (int it = 0; it < 160; ++it) {
      g = next;
      next = op.apply(g);
      double d = sup_diff(g, next);
      CHECK(d <= smax * prev + 1e-15);
      prev = d;
    }
    CHECK(op.residual(next) <= 1e-9);
    // The limit matches the exact values on the lattice.
    auto exact = f.sample_exact(level);
    REQUIRE(exact.size() == next.size());
    for (size_t k = 0; k < exact.size(); ++k) CHECK(std::fabs(next[k] - to_double(exact[k].second)) <= 1e-9);
  }
}

TEST_CASE("concurrent evaluation shares the cache safely") {
  FractalFunction f = fif_fixture("ex3.5-translation");
  std::vector<Rational> xs;
  for (int k = 0; k <= 81; ++k) xs.push_back(Rational(k, 27));
  std::vector<Rational> serial;
  for (auto& x : xs) serial.push_back(FractalFunction(f).evaluate(x).value);
  std::vector<std::vector<Rational>> out(4, std::vector<Rational>(xs.size()));
  std::vector<std::thread> threads;
  for (size_t t = 0; t < 4; ++t)
    threads.emplace_back([&, t] {
      for (size_t k = 0; k < xs.size(); ++k) out[t][(k + 17 * t) % xs.size()] = f.evaluate(xs[(k + 17 * t) % xs.size()]).value;
    });
  for (auto& th : threads) th.join();
  for (auto& o : out) CHECK(o == serial);
}

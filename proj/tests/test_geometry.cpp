#include "cwave/geometry.hpp"
#include "cwave/reflections.hpp"

#include "doctest.h"
#include "random_inputs.hpp"

#include <cmath>

using namespace cwave;
using namespace cwave::testing;

namespace {

Mat<Rational> rational_matrix(std::initializer_list<std::initializer_list<long>> rows) {
  Mat<Rational> m(rows.size(), rows.begin()->size());
  size_t i = 0;
  for (auto& r : rows) {
    size_t j = 0;
    for (long x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

// Exact orthogonal matrix from a Pythagorean parametrization: rotation or
// reflection by the angle with cos = (a^2 - b^2)/(a^2 + b^2).
Mat<Rational> pythagorean_orthogonal(long a, long b, bool reflection) {
  Rational n(a * a + b * b);
  Rational c = Rational(a * a - b * b) / n, s = Rational(2 * a * b) / n;
  if (reflection) return Mat<Rational>{{c, s}, {s, -c}};
  return Mat<Rational>{{c, -s}, {s, c}};
}

}  // namespace

TEST_CASE("expansive: reference and hand-derived examples") {
  for (auto mode : {ExpansiveMode::EigenvalueModulus, ExpansiveMode::InverseNormDecay}) {
    CHECK(is_expansive(rational_matrix({{2, 0}, {0, 2}}), mode));
    CHECK_FALSE(is_expansive(rational_matrix({{1, 0}, {0, 1}}), mode));
    CHECK(is_expansive(rational_matrix({{0, 2}, {2, 0}}), mode));  // eigenvalues +-2
  }
}

TEST_CASE("expansive: singular matrices are rejected") {
  for (auto mode : {ExpansiveMode::EigenvalueModulus, ExpansiveMode::InverseNormDecay}) {
    CHECK_THROWS_AS(is_expansive(rational_matrix({{1, 2}, {2, 4}}), mode), std::domain_error);
  }
}

TEST_CASE("expansive: the two characterizations agree on a fixed corpus") {
  std::vector<Mat<Rational>> corpus = {
      rational_matrix({{0, -1}, {1, 0}}),  // rotation
      rational_matrix({{1, 1}, {0, 1}}),   // shear
      rational_matrix({{1, 0}, {0, 1}}),   // identity
      rational_matrix({{2, 1}, {0, 2}}),   // Jordan block
      rational_matrix({{1, 1}, {-1, 1}}),  // rotation by 45 degrees times sqrt 2
      rational_matrix({{3, 0}, {0, 1}}),   // one eigenvalue 1
  };
  std::mt19937_64 local(7);
  while (corpus.size() < 56) {
    size_t n = corpus.size() % 2 ? 2 : 3;
    Mat<Rational> m(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) m(i, j) = std::uniform_int_distribution<long>(-3, 3)(local);
    if (abs_q(determinant(m)) >= 2) corpus.push_back(m);
  }
  for (auto& m : corpus) {
    bool by_eigen = is_expansive(m, ExpansiveMode::EigenvalueModulus);
    bool by_decay = is_expansive(m, ExpansiveMode::InverseNormDecay);
    CHECK(by_eigen == by_decay);
    // Independent oracle: spectral radius of A^{-1} below 1.
    double rho = 0;
    auto inv = convert<double>(inverse(m));
    for (auto& l : eigenvalues(inv)) rho = std::max(rho, std::abs(l));
    if (std::fabs(rho - 1) > 1e-6) CHECK(by_eigen == (rho < 1));
  }
}

TEST_CASE("eigenvalues of small matrices") {
  auto ev = eigenvalues(Mat<double>{{0, 2}, {2, 0}});
  REQUIRE(ev.size() == 2);
  std::vector<double> re = {ev[0].real(), ev[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-2));
  CHECK(re[1] == doctest::Approx(2));
  auto rot = eigenvalues(Mat<double>{{0, -1}, {1, 0}});
  for (auto& l : rot) CHECK(std::abs(l) == doctest::Approx(1));
}

TEST_CASE("exact rationals agree with an independent big-integer path") {
  for (int trial = 0; trial < 200; ++trial) {
    long a = uniform_int(-1000, 1000), b = uniform_int(1, 1000), c = uniform_int(-1000, 1000), d = uniform_int(1, 1000);
    Rational sum = Rational(a, b) + Rational(c, d);
    BigInt num = BigInt(a) * d + BigInt(c) * b, den = BigInt(b) * d;
    // Cross-multiplication avoids relying on normalization.
    CHECK(boost::multiprecision::numerator(sum) * den == num * boost::multiprecision::denominator(sum));
  }
}

TEST_CASE("scalars with a symbolic pi factor") {
  Scalar two_pi = Scalar::pi(2);
  CHECK(two_pi + two_pi == Scalar::pi(4));
  CHECK(two_pi * Scalar::pi(Rational(1, 2)) == Scalar(1, 2));
  CHECK(two_pi / Scalar::pi() == Scalar(2));
  CHECK(Scalar::pi(Rational(-1, 2)) < Scalar(0));
  CHECK_THROWS_AS(static_cast<void>(two_pi + Scalar(1)), std::domain_error);
  CHECK_THROWS_AS(static_cast<void>(two_pi < Scalar(7)), std::domain_error);
  CHECK(two_pi.to_double() == doctest::Approx(2 * M_PI));
  CHECK(parse_rational("0.7") == Rational(7, 10));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("affine maps: apply and compose") {
  Vec<Rational> x{1, 1};
  CHECK(AffineMap<Rational>::identity(2)(x) == x);
  AffineMap<Rational> twice = AffineMap<Rational>::linear_map(rational_matrix({{2, 0}, {0, 2}}));
  CHECK(twice(x) == Vec<Rational>{2, 2});
  auto d = AffineMap<Rational>::dilation_about(rational_matrix({{2, 0}, {0, 2}}), Vec<Rational>{1, 0});
  CHECK(d(Vec<Rational>{1, 0}) == Vec<Rational>{1, 0});

  auto g = AffineMap<Rational>(pythagorean_orthogonal(2, 1, false), Vec<Rational>{Rational(1, 3), -2});
  CHECK(compose(AffineMap<Rational>::identity(2), g) == g);
  CHECK_THROWS_AS(compose(AffineMap<Rational>::identity(3), g), std::invalid_argument);

  // Reflection about x = pi is an involution.
  Hyperplane<Scalar> wall(Vec<Scalar>{1, 0}, Scalar::pi());
  auto rho = wall.reflection();
  CHECK(compose(rho, rho) == AffineMap<Scalar>::identity(2));
  CHECK(rho(Vec<Scalar>{Scalar::pi(Rational(3, 2)), Scalar::pi(Rational(1, 2))}) ==
        Vec<Scalar>{Scalar::pi(Rational(1, 2)), Scalar::pi(Rational(1, 2))});
}

TEST_CASE("composed parallel reflections are translations by 2 pi (k - l) r") {
  Vec<Scalar> r{1, 0};
  for (long k = -3; k <= 3; ++k)
    for (long l = -3; l <= 3; ++l) {
      auto a = affine_reflection(r, Scalar::pi(k));
      auto b = affine_reflection(r, Scalar::pi(l));
      auto c = compose(a, b);
      CHECK(c.is_translation());
      CHECK(c.shift() == Vec<Scalar>{Scalar::pi(2 * (k - l)), 0});
    }
}

TEST_CASE("composition law and isometry invariants on random maps") {
  for (int trial = 0; trial < 100; ++trial) {
    long a = uniform_int(1, 9), b = uniform_int(1, 9);
    auto g = AffineMap<Rational>(pythagorean_orthogonal(a, b, trial % 2), Vec<Rational>{dyadic(-3, 3, 8), dyadic(-3, 3, 8)});
    auto h = AffineMap<Rational>(pythagorean_orthogonal(b, a + 1, trial % 3 == 0),
                                 Vec<Rational>{dyadic(-3, 3, 8), dyadic(-3, 3, 8)});
    Vec<Rational> x{dyadic(-5, 5, 16), dyadic(-5, 5, 16)}, y{dyadic(-5, 5, 16), dyadic(-5, 5, 16)};
    CHECK(compose(g, h)(x) == g(h(x)));
    CHECK(is_isometry(g));
    CHECK(dot(g.linear() * x, g.linear() * y) == dot(x, y));
    CHECK(abs_q(determinant(g.linear())) == 1);
    CHECK(compose(g, g.inverse()) == AffineMap<Rational>::identity(2));
  }
}

TEST_CASE("orthogonal invariance in float mode") {
  for (int trial = 0; trial < 100; ++trial) {
    double t = uniform_real(0, 2 * M_PI);
    Mat<double> o{{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}};
    Vec<double> x{uniform_real(-5, 5), uniform_real(-5, 5)}, y{uniform_real(-5, 5), uniform_real(-5, 5)};
    CHECK(std::fabs(dot(o * x, o * y) - dot(x, y)) <= 1e-10);
    CHECK(std::fabs(std::fabs(determinant(o)) - 1) <= 1e-12);
  }
}

TEST_CASE("hyperplanes: equality up to scaling, reflection fixes the plane") {
  Hyperplane<Rational> h(Vec<Rational>{1, 2}, 3), h2(Vec<Rational>{-2, -4}, -6), h3(Vec<Rational>{1, 2}, 4);
  CHECK(same_hyperplane(h, h2));
  CHECK_FALSE(same_hyperplane(h, h3));
  CHECK_THROWS_AS(Hyperplane<Rational>(Vec<Rational>{0, 0}, 1), std::invalid_argument);
  auto rho = h.reflection();
  Vec<Rational> on{3, 0}, off{0, 0};
  CHECK(h.contains(on));
  CHECK(rho(on) == on);
  CHECK(rho(rho(off)) == off);
  CHECK(h.side(rho(off)) == -h.side(off));
}

#include "cwave/mra.hpp"

#include "doctest.h"
#include "random_inputs.hpp"

#include <cmath>

using namespace cwave;
using namespace cwave::testing;

using Q = Rational;
using VQ = Vec<Rational>;

namespace {

double identity_deviation(const Mat<double>& m) {
  double e = 0;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      e = std::max(e, std::fabs(m(i, j) - (i == j && m.rows() == m.cols() ? 1.0 : 0.0)));
  return e;
}

const CoxeterMRA& square_mra() {
  static const CoxeterMRA mra(MRAConfig{});
  return mra;
}

Box<Q> around_delta(const CoxeterMRA& mra, int copies) {
  auto bb = mra.delta().bounding_box();
  VQ w = bb.hi - bb.lo;
  return Box<Q>{bb.lo - Q(copies) * w, bb.hi + Q(copies) * w};
}

Poly<Q> test_polynomial() {
  Poly<Q> g(2);
  g.add_term({2, 1}, 1);
  g.add_term({0, 1}, Q(-1, 2));
  g.add_term({0, 0}, Q(1, 3));
  return g;
}

}  // namespace

TEST_CASE("configuration is validated") {
  MRAConfig bad;
  bad.kappa = 1;
  CHECK_THROWS_AS(CoxeterMRA{bad}, std::invalid_argument);
  bad = MRAConfig{};
  bad.s = 1;
  CHECK_THROWS_AS(CoxeterMRA{bad}, std::invalid_argument);
  CHECK_THROWS(mra_figure("hexagon"));
}

TEST_CASE("dimensions of the continuous scaling and wavelet spaces") {
  const auto& mra = square_mra();
  CHECK(mra.cells() == 4);
  auto d = mra.dimensions();
  CHECK(d.formula_A == 8);
  CHECK(d.formula_B == 24);
  // The continuous data space is smaller than the count (d+1)N; see README.
  CHECK(d.actual_A == 5);
  CHECK(d.actual_B == 15);
  CHECK(d.actual_B == (mra.cells() - 1) * d.actual_A);
  CHECK_FALSE(d.matches());
  CHECK(mra.data_basis().size() == d.actual_A);
  for (auto& spec : mra.basis_specs()) CHECK(validate_condition_star(spec).ok);
}

TEST_CASE("orthonormality of the scaling and wavelet vectors") {
  for (const char* figure : {"square", "triangle"}) {
    MRAConfig cfg;
    cfg.figure = figure;
    CoxeterMRA mra(cfg);
    CAPTURE(figure);
    CHECK(identity_deviation(mra.gram_phi()) <= 1e-10);
    CHECK(identity_deviation(mra.gram_psi()) <= 1e-10);
    CHECK(identity_deviation(mra.cross_gram()) <= 1e-10);
    CHECK(mra.refinement_residual(5) <= 1e-9);
    // P(r_i)(a, c) = <phi^c, phi^a o u_i> computed independently from moments.
    for (size_t i = 0; i < mra.cells(); ++i) {
      auto S = mra.refinement_inner_products(i);
      auto& P = mra.filter_bank().P[i];
      double e = 0;
      for (size_t a = 0; a < S.rows(); ++a)
        for (size_t c = 0; c < S.cols(); ++c) e = std::max(e, std::fabs(S(c, a) - P(a, c)));
      CHECK(e <= 1e-10);
    }
  }
}

TEST_CASE("filter bank satisfies the paraunitary conditions") {
  const auto& fb = square_mra().filter_bank();
  const size_t N = fb.P.size();
  // sum_i P_i P_i^T = kappa^n I, sum_i Q_i Q_i^T = kappa^n I, sum_i Q_i P_i^T = 0.
  auto accumulate = [&](const std::vector<Mat<double>>& X, const std::vector<Mat<double>>& Y) {
    Mat<double> s(X[0].rows(), Y[0].rows());
    for (size_t i = 0; i < N; ++i)
      for (size_t a = 0; a < X[i].rows(); ++a)
        for (size_t b = 0; b < Y[i].rows(); ++b)
          for (size_t k = 0; k < X[i].cols(); ++k) s(a, b) += X[i](a, k) * Y[i](b, k) / 4.0;
    return s;
  };
  CHECK(identity_deviation(accumulate(fb.P, fb.P)) <= 1e-10);
  CHECK(identity_deviation(accumulate(fb.Q, fb.Q)) <= 1e-10);
  CHECK(identity_deviation(accumulate(fb.Q, fb.P)) <= 1e-10);
  CHECK(fb.words.size() == N);
  CHECK(fb.words[0] == "e");
}

TEST_CASE("dilation acts on data cell by cell") {
  const auto& mra = square_mra();
  const auto& maps = mra.subdivision().maps;
  for (auto& spec : mra.basis_specs()) {
    FractalSurface f(spec);
    for (size_t j = 0; j < maps.size(); ++j) {
      // f o u_j is again a fractal surface, with the transformed data.
      SurfaceSpec g = spec;
      g.lambda = delta_kappa_cell(maps, spec.s, spec.lambda, j);
      FractalSurface fg(g);
      for (auto& [x, v] : fg.vertex_table(3)) CHECK(v == f.evaluate(maps[j](x)).value);
    }
  }
  // With s = 0 the data are just pulled back.
  auto spec = mra.basis_specs()[0];
  auto out = delta_kappa_cell(maps, Q(0), spec.lambda, 2);
  for (size_t i = 0; i < maps.size(); ++i) CHECK(out[i] == spec.lambda[2].compose(maps[i]));
  CHECK_THROWS_AS(delta_kappa_cell(maps, Q(0), spec.lambda, maps.size()), std::invalid_argument);

  // On tables: a single entry becomes N entries at kappa r u_j.
  DataTable t;
  t.set(AffineMap<Q>::identity(2), spec.lambda);
  auto out_table = delta_kappa(maps, spec.s, 2, t);
  CHECK(out_table.entries.size() == maps.size());
  CHECK(delta_kappa(maps, spec.s, 2, DataTable{}).entries.empty());
}

TEST_CASE("projection error decreases with the level") {
  const auto& mra = square_mra();
  auto g = test_polynomial();
  double prev = mra.projection_error(g, 0);
  CHECK(prev >= -1e-12);
  for (int level = 1; level <= 3; ++level) {
    double e = mra.projection_error(g, level);
    CHECK(e >= -1e-12);
    CHECK(e < prev);
    prev = e;
  }
  // A function in V_0 is captured exactly: the constant 1 is continuous data.
  CHECK(std::fabs(mra.projection_error(Poly<Q>::constant(2, 1), 0)) <= 1e-10);
  CHECK_THROWS_AS(mra.projection_error(g, -1), std::invalid_argument);
}

TEST_CASE("perfect reconstruction and energy preservation") {
  const auto& mra = square_mra();
  auto els = mra.translates(around_delta(mra, 2));
  REQUIRE(els.size() > 4);
  auto fine = mra.project(test_polynomial(), els);
  auto dec = mra.analyze(fine);
  auto back = mra.synthesize(dec);

  double e_in = 0, e_out = 0, err = 0;
  for (auto& [k, v] : fine.entries)
    for (double x : v.second) e_in += x * x;
  for (auto* t : {&dec.coarse, &dec.detail})
    for (auto& [k, v] : t->entries)
      for (double x : v.second) e_out += x * x;
  CHECK(std::fabs(e_in - e_out) <= 1e-9 * e_in);
  for (auto& [k, v] : back.entries) {
    auto it = fine.entries.find(k);
    for (size_t a = 0; a < v.second.size(); ++a)
      err = std::max(err, std::fabs(v.second[a] - (it == fine.entries.end() ? 0.0 : it->second.second[a])));
  }
  for (auto& [k, v] : fine.entries) CHECK(back.entries.count(k));
  CHECK(err <= 1e-6);

  // Zero in, zero out.
  CoefficientTable zero;
  for (auto& [k, v] : fine.entries) zero.set(v.first, std::vector<double>(v.second.size(), 0.0));
  auto dz = mra.analyze(zero);
  for (auto* t : {&dz.coarse, &dz.detail})
    for (auto& [k, v] : t->entries)
      for (double x : v.second) CHECK(x == 0.0);

  // Random coefficient tables.
  for (int trial = 0; trial < 10; ++trial) {
    CoefficientTable rnd;
    for (auto& g : els) {
      std::vector<double> c(mra.filter_bank().dim_A);
      for (auto& x : c) x = uniform_real(-1, 1);
      rnd.set(g, c);
    }
    auto r2 = mra.synthesize(mra.analyze(rnd));
    for (auto& [k, v] : rnd.entries)
      for (size_t a = 0; a < v.second.size(); ++a) CHECK(std::fabs(r2.entries.at(k).second[a] - v.second[a]) <= 1e-9);
  }

  CoefficientTable wrong;
  wrong.set(AffineMap<Q>::identity(2), std::vector<double>{1.0});
  CHECK_THROWS_AS(mra.analyze(wrong), std::invalid_argument);
}

TEST_CASE("filter bank JSON round trip") {
  const auto& fb = square_mra().filter_bank();
  auto js = filter_bank_to_json(fb);
  auto fb2 = filter_bank_from_json(js);
  CHECK(filter_bank_to_json(fb2) == js);
  CHECK(fb2.dim_A == fb.dim_A);
  CHECK(fb2.s == fb.s);
  CHECK(fb2.P.size() == fb.P.size());
  CHECK_THROWS(filter_bank_from_json("{\"figure\": 3}"));
}

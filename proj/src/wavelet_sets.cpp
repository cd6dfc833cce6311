#include "cwave/wavelet_sets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cwave {

namespace {

Vec<Rational> filled(size_t n, const Rational& x) {
  Vec<Rational> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = x;
  return v;
}

Rational pow4_inv(int k) {  // 4^{-k}
  Rational r = 1;
  for (int i = 0; i < k; ++i) r /= 4;
  return r;
}

AffineMap<Rational> axis_map(const std::vector<int>& signs, const Vec<Rational>& shift) {
  Mat<Rational> l(signs.size(), signs.size());
  for (size_t i = 0; i < signs.size(); ++i) l(i, i) = signs[i];
  return AffineMap<Rational>(l, shift);
}

std::string measure_text(const Scalar& s) { return to_string(s); }

// G_n = 4^{-n} G_0 + beta_n with beta_n = sum_{k<=n} 4^{1-k} a.
std::vector<DyadicBoxSet> g_pieces(const DyadicBoxSet& g0, const Vec<Rational>& a, int depth) {
  std::vector<DyadicBoxSet> g{g0};
  Vec<Rational> beta(a.dim());
  for (int n = 1; n <= depth; ++n) {
    beta += pow4_inv(n - 1) * a;
    g.push_back(g0.scale(pow4_inv(n)).translate(beta));
  }
  return g;
}

}  // namespace

DyadicBoxSet cube_C(size_t n) { return DyadicBoxSet::box(filled(n, -1), filled(n, 1)); }

DyadicBoxSet shannon_set() {
  return DyadicBoxSet::interval(-2, -1).unite(DyadicBoxSet::interval(1, 2));
}

DyadicBoxSet dilation_shell(size_t n, const Rational& c) {
  return cube_C(n).scale(c).subtract(cube_C(n)).canonical();
}

GroupSpec lattice_2pi(size_t n) { return GroupSpec::integer_translations(n, 2); }
GroupSpec square_weyl() { return GroupSpec::weyl(square_C()); }
GroupSpec interval_weyl() { return GroupSpec::weyl(interval_C()); }
GroupSpec dyadic_dilations(size_t n) { return GroupSpec::scalar_dilations(n, 2); }

WaveletSetVerdict wavelet_set_criterion(const DyadicBoxSet& E) {
  size_t n = E.dim();
  WaveletSetVerdict v;
  v.translation = translation_congruent(E, cube_C(n), lattice_2pi(n));
  v.dilation = dilation_congruent(E, dilation_shell(n), dyadic_dilations(n));
  return v;
}

// ---------------------------------------------------------------------------

Scalar WaveletSetFixture::residual_bound() const { return Scalar(2 * copies) * tail; }

const DyadicBoxSet& WaveletSetFixture::part(const std::string& name) const {
  for (const auto& p : parts)
    if (p.name == name) return p.set;
  throw std::out_of_range("no part named " + name);
}

Scalar w1_piece_measure(int k) {  // (pi / 2^{2k+1})^2
  Rational side = pow4_inv(k) / 2;
  return Scalar(side * side, 2);
}

Scalar w2_piece_measure(int k) {  // 4^{-2k} pi^2 / 2
  Rational side = pow4_inv(k);
  return Scalar(side * side / 2, 2);
}

Scalar w1_tail(int depth) {  // sum_{k>n} 16^{-k} pi^2 / 4 = pi^2 16^{-n} / 60
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  return Scalar(pow4_inv(2 * depth) / 60, 2);
}

Scalar w2_tail(int depth) {  // sum_{k>n} 16^{-k} pi^2 / 2 = pi^2 16^{-n} / 30
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  return Scalar(pow4_inv(2 * depth) / 30, 2);
}

WaveletSetFixture build_w1(int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  WaveletSetFixture w;
  w.name = "w1";
  w.depth = depth;
  w.copies = 4;
  w.tail = w1_tail(depth);
  Rational h(1, 2);
  DyadicBoxSet g0 = DyadicBoxSet::box({0, 0}, {h, h});
  auto g = g_pieces(g0, Vec<Rational>{h, h}, depth);
  DyadicBoxSet e1(2);
  for (int k = 1; k <= depth; ++k) e1 = e1.unite(g[k]);
  DyadicBoxSet core = g0.unite(e1);
  DyadicBoxSet c1 = core.translate({2, 2}).canonical();
  DyadicBoxSet b1 = g0.scale(2).subtract(core).canonical();
  DyadicBoxSet a1 = b1.unite(c1).canonical();
  DyadicBoxSet a2 = a1.mirror(0).canonical();
  DyadicBoxSet a3 = a1.mirror(0).mirror(1).canonical();
  DyadicBoxSet a4 = a1.mirror(1).canonical();
  for (int k = 0; k <= depth; ++k) w.parts.push_back({"G" + std::to_string(k), g[k]});
  w.parts.push_back({"E1", e1.canonical()});
  w.parts.push_back({"C1", c1});
  w.parts.push_back({"B1", b1});
  w.parts.push_back({"A1", a1});
  w.parts.push_back({"A2", a2});
  w.parts.push_back({"A3", a3});
  w.parts.push_back({"A4", a4});
  w.parts.push_back({"E3", e1.mirror(0).mirror(1).canonical()});
  w.parts.push_back({"C3", c1.mirror(0).mirror(1).canonical()});
  w.set = a1.unite(a2).unite(a3).unite(a4).canonical();
  return w;
}

WaveletSetFixture build_w2(int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  WaveletSetFixture w;
  w.name = "w2";
  w.depth = depth;
  w.copies = 2;
  w.tail = w2_tail(depth);
  Rational h(1, 2);
  DyadicBoxSet g0 = DyadicBoxSet::box({0, -h}, {h, h});
  auto g = g_pieces(g0, Vec<Rational>{h, 0}, depth);
  DyadicBoxSet e(2);
  for (int k = 1; k <= depth; ++k) e = e.unite(g[k]);
  DyadicBoxSet core = g0.unite(e);
  DyadicBoxSet d = core.translate({2, 0}).canonical();
  DyadicBoxSet b = g0.scale(2).subtract(core).canonical();
  DyadicBoxSet a1 = b.unite(d).canonical();
  DyadicBoxSet a2 = a1.mirror(0).canonical();
  for (int k = 0; k <= depth; ++k) w.parts.push_back({"G" + std::to_string(k), g[k]});
  w.parts.push_back({"E", e.canonical()});
  w.parts.push_back({"D", d});
  w.parts.push_back({"B", b});
  w.parts.push_back({"A1", a1});
  w.parts.push_back({"A2", a2});
  w.parts.push_back({"D-", d.mirror(0).canonical()});
  w.parts.push_back({"B-", b.mirror(0).canonical()});
  w.set = a1.unite(a2).canonical();
  return w;
}

std::vector<StatementCheck> w1_statements(const WaveletSetFixture& w) {
  std::vector<StatementCheck> out;
  Scalar m = w.set.measure(), full(4, 2);
  {
    StatementCheck s;
    s.statement = "m(W1) + 4 tail = 4 pi^2 at depth " + std::to_string(w.depth);
    s.holds = m + Scalar(4) * w.tail == full;
    s.detail = "m(W1) = " + measure_text(m) + ", 4 tail = " + measure_text(Scalar(4) * w.tail);
    out.push_back(s);
  }
  {
    StatementCheck s;
    s.statement = "m(W1) = 4 pi^2 at depth " + std::to_string(w.depth);
    s.holds = m == full;
    s.detail = "B1 keeps the tail pieces G_k, k > depth, that C1 omits";
    out.push_back(s);
  }
  DyadicBoxSet two_g0 = w.part("G0").scale(2);
  auto rho = axis_map({1, -1}, {0, -2});
  rho = compose(rho, axis_map({-1, 1}, {-2, 0}));  // rho^y_- o rho^x_-
  for (const char* name : {"E3", "C3"}) {
    StatementCheck s;
    DyadicBoxSet lhs = w.part(name).transform(rho).unite(w.part("B1"));
    s.statement = std::string("rho^y_- rho^x_-(") + name + ") u B1 = 2 G0";
    s.holds = lhs.same_set(two_g0);
    s.detail = "m(lhs) = " + measure_text(lhs.measure()) + ", m(lhs \\ 2G0) = " +
               measure_text(lhs.subtract(two_g0).measure()) + ", m(2G0 \\ lhs) = " +
               measure_text(two_g0.subtract(lhs).measure());
    out.push_back(s);
  }
  return out;
}

std::vector<StatementCheck> w2_statements(const WaveletSetFixture& w) {
  std::vector<StatementCheck> out;
  Scalar m = w.set.measure(), full(4, 2);
  DyadicBoxSet C = cube_C(2);
  auto rho1 = axis_map({-1, 1}, {-2, 0});  // reflection in x = -pi
  auto rho2 = axis_map({-1, 1}, {2, 0});   // reflection in x = pi
  DyadicBoxSet cover = w.part("D").transform(rho2).unite(w.part("D-").transform(rho1));
  {
    StatementCheck s;
    s.statement = "rho_2(D) u rho_1(D-) = C";
    s.holds = cover.same_set(C);
    s.detail = "m(rho_2(D) u rho_1(D-)) = " + measure_text(cover.measure()) + ", m(C) = " + measure_text(C.measure());
    out.push_back(s);
  }
  {
    StatementCheck s;
    DyadicBoxSet full_cover = cover.unite(w.part("B")).unite(w.part("B-"));
    s.statement = "rho_2(D) u rho_1(D-) u B u B- = C";
    s.holds = full_cover.same_set(C);
    s.detail = "the pieces B, B- already lie in C and complete the cover";
    out.push_back(s);
  }
  {
    StatementCheck s;
    s.statement = "m(W2) = 4 pi^2 at depth " + std::to_string(w.depth);
    s.holds = m == full;
    s.detail = "m(W2) = " + measure_text(m) + ", 2 tail = " + measure_text(Scalar(2) * w.tail);
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

PairCheck check_pair(const DyadicBoxSet& E, const DyadicBoxSet& F, const GroupSpec& tiling,
                     const GroupSpec& dilations, int max_shell) {
  if (dilations.kind != GroupKind::Dilation) throw std::invalid_argument("second group must be a dilation group");
  if (tiling.kind == GroupKind::Dilation) throw std::invalid_argument("tiling group must be translations or reflections");
  if (E.empty() || F.empty()) throw std::invalid_argument("E and F must be nonempty");
  PairCheck p;
  for (long k = 0; k <= 64 && !p.neighbourhood; ++k)
    if (F.transform(dilations.dilation_power(-k)).subset_of(E)) {
      p.neighbourhood = true;
      p.k0 = k;
    }
  for (long j = 0; j <= max_shell && !p.relocation; ++j) {
    DyadicBoxSet shell = F.transform(dilations.dilation_power(j));
    for (const auto& g : tiling.candidates(E.bounding_box(), shell.bounding_box()))
      if (E.transform(g).subset_of(shell)) {
        p.relocation = true;
        p.shell = j;
        p.g = g;
        break;
      }
  }
  return p;
}

ConstructionResult construct_wavelet_set(const DyadicBoxSet& E, const DyadicBoxSet& F, const GroupSpec& tiling,
                                         const GroupSpec& dilations, const ConstructionOptions& opt) {
  if (!(opt.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (opt.max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  ConstructionResult res;
  if (opt.epsilon >= E.measure_double()) {
    res.set = E;
    res.trivial = true;
    res.to_E = congruence(E, E, tiling);
    res.history.push_back(0);
    return res;
  }
  res.pair = check_pair(E, F, tiling, dilations, opt.max_shell);
  if (!res.pair.neighbourhood) throw std::invalid_argument("E must contain a neighbourhood of the dilation center");
  if (!res.pair.relocation)
    throw std::invalid_argument("pairing condition failed: no group element moves E into a dilate of F");
  const auto& g = res.pair.g;
  DyadicBoxSet Fp = F.transform(dilations.dilation_power(-res.pair.k0)).canonical();
  DyadicBoxSet C = E.subtract(Fp).canonical();
  DyadicBoxSet B = C;
  double best = 1e300;
  for (int it = 0; it < opt.max_iterations; ++it) {
    DyadicBoxSet W = E.subtract(B).unite(B.transform(g)).canonical();
    auto to_E = congruence(W, E, tiling);
    auto to_F = dilation_congruent(W, F, dilations);
    double d = std::max(to_double(to_E.defect()), to_double(to_F.defect()));
    res.history.push_back(d);
    best = std::min(best, d);
    if (d <= opt.epsilon) {
      res.set = W;
      res.iterations = it;
      res.to_E = std::move(to_E);
      res.to_F = std::move(to_F);
      return res;
    }
    C = dilation_reduce(C.transform(g), Fp, dilations);
    B = B.unite(C);
  }
  std::ostringstream os;
  os << "no convergence within " << opt.max_iterations << " iterations (best residual " << best << ")";
  throw ConstructionError(os.str(), best);
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::complex<double>>> exponential_gram(const DyadicBoxSet& E, long L) {
  if (E.dim() != 1 || E.unit_power() != 1) throw std::invalid_argument("exponential_gram needs a 1-D set in units of pi");
  if (L < 0) throw std::invalid_argument("L must be nonnegative");
  const double pi = std::numbers::pi;
  // e^{i pi q} with q reduced exactly modulo 2.
  auto expi = [&](const Rational& q) {
    Rational r = q / 2;
    BigInt n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
    BigInt f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    Rational frac = r - Rational(f);
    double angle = 2 * pi * to_double(frac);
    return std::complex<double>(std::cos(angle), std::sin(angle));
  };
  size_t size = static_cast<size_t>(2 * L + 1);
  std::vector<std::vector<std::complex<double>>> gram(size, std::vector<std::complex<double>>(size));
  for (size_t a = 0; a < size; ++a)
    for (size_t b = 0; b < size; ++b) {
      long m = static_cast<long>(a) - static_cast<long>(b);
      std::complex<double> s = 0;
      for (const auto& box : E.boxes()) {
        if (m == 0) {
          s += pi * to_double(box.hi[0] - box.lo[0]);
        } else {
          s += (expi(Rational(m) * box.hi[0]) - expi(Rational(m) * box.lo[0])) /
               std::complex<double>(0, static_cast<double>(m));
        }
      }
      gram[a][b] = s;
    }
  return gram;
}

}  // namespace cwave

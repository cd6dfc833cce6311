#include "cwave/reflections.hpp"

#include <deque>
#include <map>
#include <set>

namespace cwave {

namespace {

// Sign with a tolerance in float mode; exact otherwise.
template <class T>
int sgn(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    if (x > 1e-12) return 1;
    if (x < -1e-12) return -1;
    return 0;
  } else {
    if (x > T(0)) return 1;
    if (x < T(0)) return -1;
    return 0;
  }
}

template <class T>
bool is_integer_value(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return std::abs(x - std::round(x)) < 1e-9;
  } else if constexpr (std::is_same_v<T, Rational>) {
    return denominator(x) == 1;
  } else {
    return x.is_zero() || (x.pi_power() == 0 && denominator(x.coeff()) == 1);
  }
}

template <class T>
bool approx_equal(const AffineMap<T>& a, const AffineMap<T>& b) {
  return element_key(a) == element_key(b);
}

template <class T>
std::string scalar_key(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    long long r = std::llround(x * 1e9);
    return std::to_string(r == 0 ? 0 : r);  // fold -0
  } else {
    return to_string(x);
  }
}

template <class T>
std::string hyperplane_key(Hyperplane<T> h) {
  // Normalise so the first nonzero normal coordinate is 1.
  size_t k = 0;
  while (k < h.normal.dim() && sgn(h.normal[k]) == 0) ++k;
  T t = h.normal[k];
  std::string s;
  for (size_t i = 0; i < h.normal.dim(); ++i) s += scalar_key(T(h.normal[i] / t)) + ",";
  s += scalar_key(T(h.offset / t));
  return s;
}

// Image of a wall under an isometry g(x) = L x + b.
template <class T>
Hyperplane<T> image_of(const Hyperplane<T>& h, const AffineMap<T>& g) {
  Vec<T> n = g.linear() * h.normal;
  T c = h.offset + dot(n, g.shift());
  return Hyperplane<T>(n, c);
}

template <class T>
Vec<T> centroid(const std::vector<Vec<T>>& pts) {
  Vec<T> c(pts.front().dim());
  for (auto& p : pts) c += p;
  return c / T(static_cast<long>(pts.size()));
}

template <class T>
T overlap_measure(const std::vector<Vec<T>>& cell, const Box<T>& region) {
  if (region.lo.dim() == 1) {
    T a = cell[0][0], b = cell[1][0];
    if (b < a) std::swap(a, b);
    T lo = a < region.lo[0] ? region.lo[0] : a;
    T hi = b < region.hi[0] ? b : region.hi[0];
    return hi < lo ? T(0) : T(hi - lo);
  }
  if (region.lo.dim() == 2) return clipped_area(cell, region);
  throw std::invalid_argument("enumeration is implemented for dimensions 1 and 2");
}

template <class T>
Box<T> hull(const Box<T>& a, const Box<T>& b) {
  Box<T> h = a;
  for (size_t i = 0; i < a.lo.dim(); ++i) {
    if (b.lo[i] < h.lo[i]) h.lo[i] = b.lo[i];
    if (h.hi[i] < b.hi[i]) h.hi[i] = b.hi[i];
  }
  return h;
}

// Rational coefficients and a common pi power for lattice arithmetic.
Rational unit_coeff(const Rational& x, int& power) {
  power = 0;
  return x;
}
Rational unit_coeff(const Scalar& x, int& power) {
  power = x.pi_power();
  return x.coeff();
}

}  // namespace

// ---------------------------------------------------------------------------

template <class T>
Vec<T> coroot(const Vec<T>& r) {
  T rr = dot(r, r);
  if (sgn(rr) == 0) throw std::invalid_argument("root must be nonzero");
  return (T(2) / rr) * r;
}

template <class T>
Vec<T> reflect_root(const Vec<T>& r, const Vec<T>& x) {
  T rr = dot(r, r);
  if (sgn(rr) == 0) throw std::invalid_argument("root must be nonzero");
  return x - (T(2) * dot(x, r) / rr) * r;
}

template <class T>
Vec<T> affine_reflect(const Vec<T>& r, const T& k, const Vec<T>& x) {
  return reflect_root(r, x) + k * coroot(r);
}

template <class T>
AffineMap<T> affine_reflection(const Vec<T>& r, const T& k) {
  return Hyperplane<T>(r, k).reflection();
}

template <class T>
typename RootSystem<T>::Report RootSystem<T>::validate() const {
  Report rep;
  auto fail = [&](std::string m) {
    rep.ok = false;
    rep.failures.push_back(std::move(m));
  };
  if (roots.empty()) {
    fail("empty root system");
    return rep;
  }
  size_t n = roots.front().dim();
  std::set<std::string> keys;
  auto vkey = [](const Vec<T>& v) {
    std::string s;
    for (auto& x : v) s += scalar_key(x) + ",";
    return s;
  };
  for (auto& r : roots) keys.insert(vkey(r));
  Mat<T> m(roots.size(), n);
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = 0; j < n; ++j) m(i, j) = roots[i][j];
  if constexpr (is_exact<T>::value) {
    if (!null_space(m).empty()) fail("roots do not span the space");
  }
  for (auto& r : roots) {
    if (!keys.count(vkey(-r))) fail("-r missing for r = " + to_string(r));
    for (auto& s : roots) {
      // Parallel roots must be +-r.
      T rr = dot(r, r), rs = dot(r, s), ss = dot(s, s);
      if (sgn(T(rs * rs - rr * ss)) == 0 && sgn(T(rs * rs - rr * rr)) != 0)
        fail("non-reduced multiple " + to_string(s) + " of " + to_string(r));
      if (!keys.count(vkey(reflect_root(r, s))))
        fail("rho_r(s) not a root for r = " + to_string(r) + ", s = " + to_string(s));
      T c = T(2) * rs / rr;
      if (!is_integer_value(c)) fail("2<s,r>/<r,r> not an integer for r = " + to_string(r) + ", s = " + to_string(s));
    }
  }
  if (!positive.empty()) {
    if (positive.size() != roots.size()) fail("positive marker has wrong length");
    else
      for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = 0; j < roots.size(); ++j)
          if (vkey(roots[j]) == vkey(-roots[i]) && positive[i] == positive[j])
            fail("exactly one of r, -r must be positive for r = " + to_string(roots[i]));
  }
  return rep;
}

template <class T>
std::vector<AffineMap<T>> generate_group(const std::vector<AffineMap<T>>& generators, size_t max_order) {
  if (generators.empty()) throw std::invalid_argument("no generators");
  std::vector<AffineMap<T>> out{AffineMap<T>::identity(generators.front().dim())};
  std::set<std::string> seen{element_key(out.front())};
  for (size_t i = 0; i < out.size(); ++i) {
    for (auto& g : generators) {
      AffineMap<T> h = compose(out[i], g);
      if (seen.insert(element_key(h)).second) {
        out.push_back(h);
        if (out.size() > max_order) throw std::runtime_error("group exceeds the order cap");
      }
    }
  }
  return out;
}

KleinFour klein_four_group() {
  KleinFour k;
  Vec<Rational> e1{Rational(1), Rational(0)}, e2{Rational(0), Rational(1)};
  k.roots.roots = {e1, e2, -e1, -e2};
  k.roots.positive = {true, true, false, false};
  k.generators = {affine_reflection(e1, Rational(0)), affine_reflection(e2, Rational(0))};
  k.elements = generate_group(k.generators);
  return k;
}

// ---------------------------------------------------------------------------

template <class T>
bool FoldableFigure<T>::contains(const Vec<T>& x) const {
  for (auto& w : walls)
    if (sgn(w.side(x)) > 0) return false;
  return true;
}

template <class T>
bool FoldableFigure<T>::strictly_contains(const Vec<T>& x) const {
  for (auto& w : walls)
    if (sgn(w.side(x)) >= 0) return false;
  return true;
}

template <class T>
Box<T> FoldableFigure<T>::bounding_box() const {
  Box<T> b{vertices.front(), vertices.front()};
  for (auto& v : vertices)
    for (size_t i = 0; i < v.dim(); ++i) {
      if (v[i] < b.lo[i]) b.lo[i] = v[i];
      if (b.hi[i] < v[i]) b.hi[i] = v[i];
    }
  return b;
}

template <class T>
T FoldableFigure<T>::volume() const {
  if (dim() == 1) {
    Box<T> b = bounding_box();
    return b.hi[0] - b.lo[0];
  }
  if (dim() == 2) {
    T a = polygon_area(vertices);
    return a < T(0) ? T(-a) : a;
  }
  throw std::invalid_argument("volume implemented for dimensions 1 and 2");
}

template <class T>
typename FoldableFigure<T>::Report FoldableFigure<T>::validate() const {
  Report rep;
  auto fail = [&](std::string m) {
    rep.ok = false;
    rep.failures.push_back(std::move(m));
  };
  size_t n = dim();
  if (walls.size() != generators.size()) fail("one generator per wall required");
  if (!strictly_contains(theta)) fail("theta is not an interior point");
  for (auto& v : vertices)
    if (!contains(v)) fail("vertex " + to_string(v) + " violates a wall");
  for (size_t k = 0; k < walls.size() && k < generators.size(); ++k) {
    const auto& g = generators[k];
    if (!approx_equal(compose(g, g), AffineMap<T>::identity(n))) fail("generator " + std::to_string(k) + " is not an involution");
    if (!is_isometry(g)) fail("generator " + std::to_string(k) + " is not an isometry");
    size_t on = 0;
    for (auto& v : vertices) {
      if (sgn(walls[k].side(v)) == 0) {
        ++on;
        Vec<T> d = g(v) - v;
        for (auto& x : d)
          if (sgn(x) != 0) fail("generator " + std::to_string(k) + " moves a wall point");
      }
    }
    if (on < n) fail("wall " + std::to_string(k) + " is not a facet");
    // The reflected figure must lie on the other side of the wall.
    if (sgn(walls[k].side(g(theta))) <= 0) fail("generator " + std::to_string(k) + " does not flip across its wall");
  }
  // Coxeter condition: products of pairs of generators have finite order
  // (dihedral angles pi/m).  Parallel walls generate translations.
  for (size_t a = 0; a < generators.size(); ++a)
    for (size_t b = a + 1; b < generators.size(); ++b) {
      Mat<T> p = generators[a].linear() * generators[b].linear();
      if (p == Mat<T>::identity(n)) continue;
      Mat<T> q = p;
      bool finite = false;
      for (int m = 1; m <= 12 && !finite; ++m) {
        bool id = true;
        for (size_t i = 0; i < n; ++i)
          for (size_t j = 0; j < n; ++j)
            if (sgn(T(q(i, j) - (i == j ? T(1) : T(0)))) != 0) id = false;
        finite = id;
        q = q * p;
      }
      if (!finite) fail("walls " + std::to_string(a) + ", " + std::to_string(b) + " meet at an angle that is not pi/m");
    }
  return rep;
}

template <class T>
FoldableFigure<T> make_figure(std::string name, std::vector<Vec<T>> vertices, std::vector<Hyperplane<T>> walls,
                              Vec<T> theta) {
  FoldableFigure<T> f;
  f.name = std::move(name);
  f.vertices = std::move(vertices);
  f.walls = std::move(walls);
  f.theta = std::move(theta);
  for (auto& w : f.walls) f.generators.push_back(w.reflection());
  return f;
}

FoldableFigure<Scalar> square_C() {
  using V = Vec<Scalar>;
  Scalar pi = Scalar::pi();
  return make_figure<Scalar>("C", {V{-pi, -pi}, V{pi, -pi}, V{pi, pi}, V{-pi, pi}},
                             {Hyperplane<Scalar>(V{1, 0}, pi), Hyperplane<Scalar>(V{0, 1}, pi),
                              Hyperplane<Scalar>(V{-1, 0}, pi), Hyperplane<Scalar>(V{0, -1}, pi)},
                             V{0, 0});
}

FoldableFigure<Scalar> quarter_square() {
  using V = Vec<Scalar>;
  Scalar pi = Scalar::pi();
  return make_figure<Scalar>("quarter", {V{0, 0}, V{pi, 0}, V{pi, pi}, V{0, pi}},
                             {Hyperplane<Scalar>(V{1, 0}, pi), Hyperplane<Scalar>(V{0, 1}, pi),
                              Hyperplane<Scalar>(V{-1, 0}, 0), Hyperplane<Scalar>(V{0, -1}, 0)},
                             V{pi / 2, pi / 2});
}

FoldableFigure<Scalar> interval_C() {
  using V = Vec<Scalar>;
  Scalar pi = Scalar::pi();
  return make_figure<Scalar>("C1", {V{-pi}, V{pi}}, {Hyperplane<Scalar>(V{1}, pi), Hyperplane<Scalar>(V{-1}, pi)},
                             V{0});
}

FoldableFigure<Rational> unit_square() {
  using V = Vec<Rational>;
  using Q = Rational;
  return make_figure<Rational>("unit_square", {V{0, 0}, V{1, 0}, V{1, 1}, V{0, 1}},
                               {Hyperplane<Q>(V{1, 0}, 1), Hyperplane<Q>(V{0, 1}, 1), Hyperplane<Q>(V{-1, 0}, 0),
                                Hyperplane<Q>(V{0, -1}, 0)},
                               V{Q(1, 2), Q(1, 2)});
}

FoldableFigure<Rational> right_triangle() {
  using V = Vec<Rational>;
  using Q = Rational;
  return make_figure<Rational>("right_triangle", {V{0, 0}, V{1, 0}, V{0, 1}},
                               {Hyperplane<Q>(V{0, -1}, 0), Hyperplane<Q>(V{1, 1}, 1), Hyperplane<Q>(V{-1, 0}, 0)},
                               V{Q(1, 4), Q(1, 4)});
}

FoldableFigure<Rational> right_triangle_cell() {
  using V = Vec<Rational>;
  using Q = Rational;
  return make_figure<Rational>("right_triangle_cell", {V{Q(1, 2), 0}, V{1, 0}, V{Q(1, 2), Q(1, 2)}},
                               {Hyperplane<Q>(V{0, -1}, 0), Hyperplane<Q>(V{1, 1}, 1), Hyperplane<Q>(V{-1, 0}, Q(-1, 2))},
                               V{Q(5, 8), Q(1, 8)});
}

FoldableFigure<double> equilateral_triangle() {
  using V = Vec<double>;
  double h = std::sqrt(3.0) / 2;
  // Walls: y >= 0, and the two slanted sides with unit outward normals.
  return make_figure<double>("equilateral", {V{0, 0}, V{1, 0}, V{0.5, h}},
                             {Hyperplane<double>(V{0, -1}, 0), Hyperplane<double>(V{h, 0.5}, h),
                              Hyperplane<double>(V{-h, 0.5}, 0)},
                             V{0.5, h / 3});
}

// ---------------------------------------------------------------------------

template <class T>
T polygon_area(const std::vector<Vec<T>>& poly) {
  T s(0);
  for (size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return s / T(2);
}

template <class T>
T clipped_area(const std::vector<Vec<T>>& polygon, const Box<T>& box) {
  std::vector<Vec<T>> poly = polygon;
  // Clip against x_k >= lo_k and x_k <= hi_k in turn.
  for (size_t k = 0; k < 2; ++k)
    for (int side = 0; side < 2; ++side) {
      const T& bound = side == 0 ? box.lo[k] : box.hi[k];
      auto inside = [&](const Vec<T>& p) { return side == 0 ? sgn(T(p[k] - bound)) >= 0 : sgn(T(p[k] - bound)) <= 0; };
      std::vector<Vec<T>> out;
      for (size_t i = 0; i < poly.size(); ++i) {
        const Vec<T>& a = poly[i];
        const Vec<T>& b = poly[(i + 1) % poly.size()];
        bool ia = inside(a), ib = inside(b);
        if (ia) out.push_back(a);
        if (ia != ib) {
          T t = (bound - a[k]) / (b[k] - a[k]);
          Vec<T> p = a + t * (b - a);
          p[k] = bound;
          out.push_back(p);
        }
      }
      poly = std::move(out);
      if (poly.size() < 3) return T(0);
    }
  T a = polygon_area(poly);
  return a < T(0) ? T(-a) : a;
}

template <class T>
std::string element_key(const AffineMap<T>& g) {
  std::string s;
  for (auto& x : g.linear().data()) s += scalar_key(x) + ",";
  s += "|";
  for (auto& x : g.shift()) s += scalar_key(x) + ",";
  return s;
}

template <class T>
std::pair<Vec<T>, WeylWord<T>> fold(const FoldableFigure<T>& figure, const Vec<T>& x, size_t max_steps) {
  Vec<T> y = x;
  WeylWord<T> w{{}, AffineMap<T>::identity(x.dim())};
  for (size_t step = 0;; ++step) {
    size_t k = 0;
    while (k < figure.walls.size() && sgn(figure.walls[k].side(y)) <= 0) ++k;
    if (k == figure.walls.size()) break;
    if (step >= max_steps) throw std::runtime_error("fold did not terminate within the step limit");
    y = figure.generators[k](y);
    w.word.push_back(static_cast<int>(k));
    w.iso = compose(w.iso, figure.generators[k]);
  }
  return {y, w};
}

template <class T>
std::vector<Cell<T>> enumerate_group(const FoldableFigure<T>& figure, const Box<T>& region) {
  const size_t n = figure.dim();
  if (region.lo.dim() != n || region.hi.dim() != n) throw std::invalid_argument("region dimension mismatch");
  for (size_t i = 0; i < n; ++i)
    if (!(region.lo[i] < region.hi[i])) throw std::invalid_argument("region must have positive measure");

  // Breadth-first search over the cells meeting the box hull of F and the
  // region.  That hull is convex, so it contains a minimal gallery from F to
  // every cell it meets; BFS with generators tried in index order therefore
  // reaches each element first through its shortlex-minimal word.
  Box<T> search = hull(figure.bounding_box(), region);
  std::vector<Cell<T>> found;
  std::map<std::string, bool> seen;
  std::deque<WeylWord<T>> queue;
  queue.push_back({{}, AffineMap<T>::identity(n)});
  seen[element_key(queue.front().iso)] = true;
  while (!queue.empty()) {
    WeylWord<T> w = std::move(queue.front());
    queue.pop_front();
    std::vector<Vec<T>> verts;
    for (auto& v : figure.vertices) verts.push_back(w.iso(v));
    if (sgn(overlap_measure(verts, search)) <= 0) continue;
    if (sgn(overlap_measure(verts, region)) > 0) found.push_back({w, verts});
    for (size_t k = 0; k < figure.generators.size(); ++k) {
      WeylWord<T> next = w;
      next.word.push_back(static_cast<int>(k));
      next.iso = compose(w.iso, figure.generators[k]);
      auto key = element_key(next.iso);
      if (seen.emplace(key, true).second) queue.push_back(std::move(next));
    }
  }
  return found;
}

template <class T>
static std::optional<Subdivision<T>> try_subdivide(const FoldableFigure<T>& figure, int kappa, size_t cv) {
  const size_t n = figure.dim();
  const Vec<T>& p = figure.vertices[cv];
  T k(kappa);
  Subdivision<T> sub;
  sub.cell = figure;
  sub.kappa = kappa;
  sub.center_vertex = cv;
  std::vector<Vec<T>> dv;
  for (auto& v : figure.vertices) dv.push_back(p + k * (v - p));
  std::vector<Hyperplane<T>> dw;
  for (auto& w : figure.walls) dw.emplace_back(w.normal, T(k * w.offset - (k - T(1)) * dot(p, w.normal)));
  sub.delta = make_figure<T>(figure.name + "_delta", dv, dw, p + k * (figure.theta - p));

  Box<T> region = sub.delta.bounding_box();
  auto cells = enumerate_group(figure, region);
  Mat<T> lin = Mat<T>::identity(n);
  for (size_t i = 0; i < n; ++i) lin(i, i) = T(1) / k;
  AffineMap<T> u1(lin, p - (T(1) / k) * p);
  size_t expect = 1;
  for (size_t i = 0; i < n; ++i) expect *= static_cast<size_t>(kappa);
  for (auto& c : cells) {
    if (!sub.delta.strictly_contains(centroid(c.vertices))) continue;
    for (auto& v : c.vertices)
      if (!sub.delta.contains(v)) return std::nullopt;
    sub.maps.push_back(compose(c.element.iso, u1));
  }
  if (sub.maps.size() != expect) return std::nullopt;
  return sub;
}

template <class T>
Subdivision<T> subdivide(const FoldableFigure<T>& figure, int kappa, std::optional<size_t> center_vertex) {
  if (kappa < 2) throw std::invalid_argument("kappa must be an integer >= 2");
  if (center_vertex) {
    if (*center_vertex >= figure.vertices.size()) throw std::out_of_range("center vertex index");
    auto s = try_subdivide(figure, kappa, *center_vertex);
    if (!s) throw std::runtime_error("the scaled figure is not a union of kappa^n tessellation cells");
    return *s;
  }
  for (size_t v = 0; v < figure.vertices.size(); ++v)
    if (auto s = try_subdivide(figure, kappa, v)) return *s;
  throw std::runtime_error("no vertex of the figure yields a subdivision into kappa^n cells");
}

// ---------------------------------------------------------------------------

template <class T>
bool lattice_contains(const std::vector<Vec<T>>& gens, const Vec<T>& v) {
  static_assert(is_exact<T>::value, "lattice membership needs exact arithmetic");
  if (gens.empty()) {
    for (auto& x : v)
      if (!exact_zero(x)) return false;
    return true;
  }
  const size_t n = v.dim();
  // Common unit (power of pi) and common denominator.
  int power = 0;
  bool have_power = false;
  std::vector<std::vector<Rational>> rows;
  auto take = [&](const Vec<T>& g) -> bool {
    std::vector<Rational> r(n);
    for (size_t i = 0; i < n; ++i) {
      int p = 0;
      r[i] = unit_coeff(g[i], p);
      if (r[i] == 0) continue;
      if (!have_power) {
        power = p;
        have_power = true;
      } else if (p != power) {
        return false;
      }
    }
    rows.push_back(r);
    return true;
  };
  for (auto& g : gens)
    if (!take(g)) throw std::domain_error("lattice generators mix units");
  if (!take(v)) return false;
  BigInt den = 1;
  for (auto& r : rows)
    for (auto& x : r) den = boost::multiprecision::lcm(den, BigInt(denominator(x)));
  std::vector<std::vector<BigInt>> m;
  for (auto& r : rows) {
    std::vector<BigInt> ir(n);
    for (size_t i = 0; i < n; ++i) ir[i] = BigInt(numerator(r[i]) * (den / denominator(r[i])));
    m.push_back(ir);
  }
  std::vector<BigInt> target = m.back();
  m.pop_back();
  // Integer row echelon form by repeated Euclidean reduction.
  size_t cur = 0;
  std::vector<size_t> pivcol;
  for (size_t c = 0; c < n && cur < m.size(); ++c) {
    while (true) {
      size_t best = m.size();
      for (size_t r = cur; r < m.size(); ++r)
        if (m[r][c] != 0 && (best == m.size() || abs(m[r][c]) < abs(m[best][c]))) best = r;
      if (best == m.size()) break;
      std::swap(m[cur], m[best]);
      bool more = false;
      for (size_t r = cur + 1; r < m.size(); ++r) {
        if (m[r][c] == 0) continue;
        BigInt q = m[r][c] / m[cur][c];
        for (size_t j = 0; j < n; ++j) m[r][j] -= q * m[cur][j];
        if (m[r][c] != 0) more = true;
      }
      if (!more) {
        pivcol.push_back(c);
        ++cur;
        break;
      }
    }
  }
  for (size_t i = 0; i < pivcol.size(); ++i) {
    size_t c = pivcol[i];
    if (target[c] % m[i][c] != 0) return false;
    BigInt q = target[c] / m[i][c];
    for (size_t j = 0; j < n; ++j) target[j] -= q * m[i][j];
  }
  for (auto& x : target)
    if (x != 0) return false;
  return true;
}

template <class T>
typename SemidirectStructure<T>::Decomposition SemidirectStructure<T>::decompose(const AffineMap<T>& g) const {
  Decomposition d;
  const Mat<T>& l = g.linear();
  d.w = AffineMap<T>(l, p - l * p);
  d.translation = g.shift() - d.w.shift();
  std::string key = element_key(d.w);
  for (auto& s : stabilizer)
    if (element_key(s) == key) d.w_in_stabilizer = true;
  if constexpr (is_exact<T>::value) d.translation_in_lattice = lattice_contains(coroot_translations, d.translation);
  return d;
}

template <class T>
SemidirectStructure<T> semidirect_structure(const FoldableFigure<T>& figure, size_t vertex) {
  if (vertex >= figure.vertices.size()) throw std::out_of_range("vertex index");
  SemidirectStructure<T> s;
  s.p = figure.vertices[vertex];
  const size_t n = figure.dim();
  // Walls of the tessellation near p: every cell meeting a box of three
  // figure-diameters around p.
  Box<T> fb = figure.bounding_box();
  Box<T> region{s.p, s.p};
  for (size_t i = 0; i < n; ++i) {
    T w = fb.hi[i] - fb.lo[i];
    region.lo[i] = s.p[i] - T(3) * w;
    region.hi[i] = s.p[i] + T(3) * w;
  }
  auto cells = enumerate_group(figure, region);
  std::map<std::string, Hyperplane<T>> walls;
  for (auto& c : cells)
    for (auto& w : figure.walls) {
      Hyperplane<T> h = image_of(w, c.element.iso);
      walls.emplace(hyperplane_key(h), h);
    }
  std::vector<AffineMap<T>> refl;
  for (auto& [key, h] : walls)
    if (sgn(h.side(s.p)) == 0) {
      s.walls_through_p.push_back(h);
      refl.push_back(h.reflection());
    }
  s.stabilizer = generate_group(refl, 1000);
  // For each wall through p, the nearest parallel wall gives the coroot
  // translation rho_{H'} o rho_H.
  for (auto& h : s.walls_through_p) {
    std::optional<Vec<T>> best;
    T best_len(0);
    for (auto& [key, h2] : walls) {
      if (sgn(h2.side(s.p)) == 0) continue;
      // parallel: normals proportional
      T nn = dot(h.normal, h.normal);
      T t = dot(h2.normal, h.normal) / nn;
      Vec<T> diff = h2.normal - t * h.normal;
      bool par = true;
      for (auto& x : diff)
        if (sgn(x) != 0) par = false;
      if (!par) continue;
      AffineMap<T> tr = compose(h2.reflection(), h.reflection());
      Vec<T> v = tr.shift();
      T len = dot(v, v);
      if (!best || len < best_len) {
        best = v;
        best_len = len;
      }
    }
    if (best) s.coroot_translations.push_back(*best);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Explicit instantiations.

#define CWAVE_INSTANTIATE(T)                                                                                  \
  template Vec<T> coroot(const Vec<T>&);                                                                      \
  template Vec<T> reflect_root(const Vec<T>&, const Vec<T>&);                                                 \
  template Vec<T> affine_reflect(const Vec<T>&, const T&, const Vec<T>&);                                     \
  template AffineMap<T> affine_reflection(const Vec<T>&, const T&);                                           \
  template struct RootSystem<T>;                                                                              \
  template std::vector<AffineMap<T>> generate_group(const std::vector<AffineMap<T>>&, size_t);               \
  template struct FoldableFigure<T>;                                                                          \
  template FoldableFigure<T> make_figure(std::string, std::vector<Vec<T>>, std::vector<Hyperplane<T>>, Vec<T>); \
  template std::vector<Cell<T>> enumerate_group(const FoldableFigure<T>&, const Box<T>&);                    \
  template std::pair<Vec<T>, WeylWord<T>> fold(const FoldableFigure<T>&, const Vec<T>&, size_t);             \
  template Subdivision<T> subdivide(const FoldableFigure<T>&, int, std::optional<size_t>);                   \
  template struct SemidirectStructure<T>;                                                                     \
  template SemidirectStructure<T> semidirect_structure(const FoldableFigure<T>&, size_t);                    \
  template T clipped_area(const std::vector<Vec<T>>&, const Box<T>&);                                         \
  template T polygon_area(const std::vector<Vec<T>>&);                                                        \
  template std::string element_key(const AffineMap<T>&);

CWAVE_INSTANTIATE(Scalar)
CWAVE_INSTANTIATE(Rational)
CWAVE_INSTANTIATE(double)
#undef CWAVE_INSTANTIATE

template bool lattice_contains(const std::vector<Vec<Scalar>>&, const Vec<Scalar>&);
template bool lattice_contains(const std::vector<Vec<Rational>>&, const Vec<Rational>&);

}  // namespace cwave

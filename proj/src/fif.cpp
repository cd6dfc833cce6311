#include "cwave/fif.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace cwave {

Vec<double> GraphMap::apply(const Vec<double>& p) const {
  return Vec<double>{to_double(a) * p[0] + to_double(alpha), to_double(c) * p[0] + to_double(s) * p[1] + to_double(beta)};
}

AffineMap<double> GraphMap::as_affine() const {
  return AffineMap<double>(Mat<double>{{to_double(a), 0.0}, {to_double(c), to_double(s)}},
                           Vec<double>{to_double(alpha), to_double(beta)});
}

IFS1D coefficients_from_interpolation(const std::vector<std::pair<Rational, Rational>>& points,
                                      const std::vector<Rational>& s) {
  if (points.size() < 2) throw std::invalid_argument("at least two interpolation points are required");
  size_t n = points.size() - 1;
  if (s.size() != n) throw std::invalid_argument("one scaling factor per subinterval is required");
  IFS1D ifs;
  for (auto& [x, y] : points) {
    if (!ifs.x.empty() && !(ifs.x.back() < x)) throw std::invalid_argument("interpolation knots must be strictly increasing");
    ifs.x.push_back(x);
    ifs.y.push_back(y);
  }
  for (auto& si : s)
    if (abs_q(si) >= 1) throw std::invalid_argument("scaling factors must satisfy |s_i| < 1");
  ifs.s = s;
  ifs.lo = ifs.x.front();
  ifs.hi = ifs.x.back();
  const Rational& a = ifs.lo;
  const Rational& b = ifs.hi;
  Rational len = b - a;
  const Rational& y0 = ifs.y.front();
  const Rational& yn = ifs.y.back();
  for (size_t i = 1; i <= n; ++i) {
    GraphMap m;
    m.s = s[i - 1];
    m.a = (ifs.x[i] - ifs.x[i - 1]) / len;
    m.alpha = (b * ifs.x[i - 1] - a * ifs.x[i]) / len;
    m.c = (ifs.y[i] - ifs.y[i - 1] - m.s * (yn - y0)) / len;
    m.beta = (b * ifs.y[i - 1] - a * ifs.y[i] - m.s * (b * y0 - a * yn)) / len;
    ifs.maps.push_back(m);
  }
  return ifs;
}

std::vector<Vec<double>> hutchinson_step(const std::vector<AffineMap<double>>& maps,
                                         const std::vector<Vec<double>>& points) {
  if (points.empty()) throw std::invalid_argument("Hutchinson operator applied to an empty set");
  if (maps.empty()) throw std::invalid_argument("no maps");
  std::vector<Vec<double>> out;
  out.reserve(maps.size() * points.size());
  for (auto& m : maps)
    for (auto& p : points) out.push_back(m(p));
  return out;
}

double hausdorff(const std::vector<Vec<double>>& a, const std::vector<Vec<double>>& b, double theta) {
  auto d = [theta](const Vec<double>& p, const Vec<double>& q) {
    return std::abs(p[0] - q[0]) + theta * std::abs(p[1] - q[1]);
  };
  auto directed = [&](const std::vector<Vec<double>>& x, const std::vector<Vec<double>>& y) {
    double worst = 0;
    for (auto& p : x) {
      double best = INFINITY;
      for (auto& q : y) best = std::min(best, d(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::pair<double, double> contraction_metric(const IFS1D& ifs) {
  // d' = a|dx| + theta|c dx + s dy| <= (a + theta|c|)|dx| + |s| theta|dy|.
  double amax = 0, cmax = 0, smax = 0;
  for (auto& m : ifs.maps) {
    amax = std::max(amax, std::abs(to_double(m.a)));
    cmax = std::max(cmax, std::abs(to_double(m.c)));
    smax = std::max(smax, std::abs(to_double(m.s)));
  }
  if (cmax == 0) return {1.0, std::max(amax, smax)};
  double theta = smax > amax ? (smax - amax) / cmax : (1 - amax) / (2 * cmax);
  double q = smax;
  for (auto& m : ifs.maps) q = std::max(q, std::abs(to_double(m.a)) + theta * std::abs(to_double(m.c)));
  return {theta, q};
}

std::vector<Affine1> build_maps(PartitionMode mode, int n) {
  if (n < 2) throw std::invalid_argument("need N >= 2 maps");
  std::vector<Affine1> u;
  Rational inv(1, n);
  u.push_back({inv, 0});
  for (int i = 2; i <= n; ++i) {
    if (mode == PartitionMode::Translation) {
      u.push_back({inv, Rational(i - 1)});
    } else {
      // R_{i-1}(x) = 2(i-1) - x applied after u_{i-1}.
      const Affine1& p = u.back();
      u.push_back({-p.a, Rational(2 * (i - 1)) - p.b});
    }
  }
  return u;
}

// ---------------------------------------------------------------------------

FractalFunction::FractalFunction(Rational lo, Rational hi, std::vector<Affine1> u, std::vector<Poly1<Rational>> lambda,
                                 std::vector<Rational> s)
    : lo_(std::move(lo)), hi_(std::move(hi)), u_(std::move(u)), lambda_(std::move(lambda)), s_(std::move(s)) {
  init();
}

FractalFunction::FractalFunction(const FractalFunction& o)
    : lo_(o.lo_), hi_(o.hi_), u_(o.u_), lambda_(o.lambda_), s_(o.s_), knots_(o.knots_), f_lo_(o.f_lo_), f_hi_(o.f_hi_) {}

FractalFunction& FractalFunction::operator=(const FractalFunction& o) {
  if (this == &o) return *this;
  lo_ = o.lo_;
  hi_ = o.hi_;
  u_ = o.u_;
  lambda_ = o.lambda_;
  s_ = o.s_;
  knots_ = o.knots_;
  f_lo_ = o.f_lo_;
  f_hi_ = o.f_hi_;
  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_.clear();
  return *this;
}

void FractalFunction::init() {
  size_t n = u_.size();
  if (n == 0) throw std::invalid_argument("at least one map is required");
  if (lambda_.size() != n || s_.size() != n) throw std::invalid_argument("maps, data and scalings must have equal length");
  if (!(lo_ < hi_)) throw std::invalid_argument("empty domain");
  for (auto& si : s_)
    if (abs_q(si) >= 1) throw std::invalid_argument("scaling factors must satisfy |s_i| < 1");
  // The images u_i([lo, hi]) must tile [lo, hi].
  std::vector<std::pair<Rational, Rational>> cells;
  for (auto& u : u_) {
    if (u.a == 0) throw std::invalid_argument("degenerate map");
    Rational p = u(lo_), q = u(hi_);
    if (q < p) std::swap(p, q);
    cells.emplace_back(p, q);
  }
  std::sort(cells.begin(), cells.end());
  if (cells.front().first != lo_ || cells.back().second != hi_) throw std::invalid_argument("maps do not cover the domain");
  for (size_t i = 1; i < cells.size(); ++i)
    if (cells[i].first != cells[i - 1].second) throw std::invalid_argument("maps do not partition the domain");
  knots_.clear();
  knots_.push_back(lo_);
  for (auto& c : cells) knots_.push_back(c.second);

  // Endpoint equations: e = u_k(t) with t in {lo, hi} gives
  // f(e) = lambda_k(t) + s_k f(t).  Solve the 2x2 system.
  Mat<Rational> m(2, 2);
  Vec<Rational> rhs(2);
  Rational ends[2] = {lo_, hi_};
  for (int e = 0; e < 2; ++e) {
    bool found = false;
    for (size_t k = 0; k < n && !found; ++k)
      for (int t = 0; t < 2 && !found; ++t)
        if (u_[k](ends[t]) == ends[e]) {
          m(e, e) += 1;
          m(e, t) -= s_[k];
          rhs[e] = lambda_[k](ends[t]);
          found = true;
        }
    if (!found) throw std::invalid_argument("domain endpoint is not the image of an endpoint");
  }
  Vec<Rational> v = solve(m, rhs);
  f_lo_ = v[0];
  f_hi_ = v[1];
}

FractalFunction FractalFunction::from_ifs(const IFS1D& ifs) {
  std::vector<Affine1> u;
  std::vector<Poly1<Rational>> lam;
  for (auto& m : ifs.maps) {
    u.push_back({m.a, m.alpha});
    lam.push_back(Poly1<Rational>::affine(m.c, m.beta));
  }
  return FractalFunction(ifs.lo, ifs.hi, std::move(u), std::move(lam), ifs.s);
}

FractalFunction FractalFunction::interpolating(Rational lo, Rational hi, std::vector<Affine1> u,
                                               const std::vector<Rational>& knot_values, std::vector<Rational> s) {
  // Knot set = sorted cell endpoints.
  std::vector<Rational> knots{lo, hi};
  for (auto& m : u) {
    knots.push_back(m(lo));
    knots.push_back(m(hi));
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  if (knot_values.size() != knots.size()) throw std::invalid_argument("one value per knot is required");
  auto value_at = [&](const Rational& x) {
    auto it = std::lower_bound(knots.begin(), knots.end(), x);
    return knot_values[static_cast<size_t>(it - knots.begin())];
  };
  const Rational& ylo = knot_values.front();
  const Rational& yhi = knot_values.back();
  std::vector<Poly1<Rational>> lam;
  for (size_t i = 0; i < u.size(); ++i) {
    Rational l0 = value_at(u[i](lo)) - s.at(i) * ylo;
    Rational l1 = value_at(u[i](hi)) - s.at(i) * yhi;
    Rational slope = (l1 - l0) / (hi - lo);
    lam.push_back(Poly1<Rational>::affine(slope, l0 - slope * lo));
  }
  return FractalFunction(std::move(lo), std::move(hi), std::move(u), std::move(lam), std::move(s));
}

double FractalFunction::sup_bound() const {
  double r = std::max(std::abs(to_double(lo_)), std::abs(to_double(hi_)));
  double lmax = 0, smax = 0;
  for (size_t i = 0; i < u_.size(); ++i) {
    double b = 0, p = 1;
    for (auto& c : lambda_[i].coeffs()) {
      b += std::abs(to_double(c)) * p;
      p *= r;
    }
    lmax = std::max(lmax, b);
    smax = std::max(smax, std::abs(to_double(s_[i])));
  }
  return lmax / (1 - smax);
}

size_t FractalFunction::cell_of(const Rational& x) const {
  for (size_t i = 0; i < u_.size(); ++i) {
    Rational p = u_[i](lo_), q = u_[i](hi_);
    if (q < p) std::swap(p, q);
    if (p <= x && x <= q) return i;
  }
  throw std::out_of_range("abscissa outside the domain");
}

EvalResult FractalFunction::evaluate(const Rational& x0, int depth) const {
  if (x0 < lo_ || x0 > hi_) throw std::out_of_range("abscissa outside the domain");
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(x0);
    if (it != cache_.end()) return {true, it->second, {to_double(it->second), 0}};
  }
  Rational acc(0), mult(1), x = x0;
  auto finish = [&](const Rational& v) {
    EvalResult r{true, v, {to_double(v), 0}};
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(x0, v);
    return r;
  };
  for (int k = 0;; ++k) {
    if (x == lo_) return finish(acc + mult * f_lo_);
    if (x == hi_) return finish(acc + mult * f_hi_);
    if (k >= depth) break;
    size_t i = cell_of(x);
    Rational t = u_[i].inverse(x);
    acc += mult * lambda_[i](t);
    mult *= s_[i];
    if (mult == 0) return finish(acc);
    x = t;
  }
  double rad = std::abs(to_double(mult)) * sup_bound();
  return {false, Rational(0), {to_double(acc), rad}};
}

double FractalFunction::evaluate_double(double x, int depth) const {
  double lo = to_double(lo_), hi = to_double(hi_);
  if (x < lo || x > hi) throw std::out_of_range("abscissa outside the domain");
  size_t n = u_.size();
  std::vector<double> a(n), b(n), s(n), clo(n), chi(n);
  std::vector<std::vector<double>> lam(n);
  for (size_t i = 0; i < n; ++i) {
    a[i] = to_double(u_[i].a);
    b[i] = to_double(u_[i].b);
    s[i] = to_double(s_[i]);
    clo[i] = std::min(a[i] * lo + b[i], a[i] * hi + b[i]);
    chi[i] = std::max(a[i] * lo + b[i], a[i] * hi + b[i]);
    for (auto& c : lambda_[i].coeffs()) lam[i].push_back(to_double(c));
  }
  double acc = 0, mult = 1;
  double flo = to_double(f_lo_), fhi = to_double(f_hi_);
  for (int k = 0; k < depth; ++k) {
    if (x == lo) return acc + mult * flo;
    if (x == hi) return acc + mult * fhi;
    size_t i = 0;
    while (i + 1 < n && !(clo[i] <= x && x <= chi[i])) ++i;
    double t = (x - b[i]) / a[i];
    t = std::clamp(t, lo, hi);
    double v = 0;
    for (size_t j = lam[i].size(); j-- > 0;) v = v * t + lam[i][j];
    acc += mult * v;
    mult *= s[i];
    if (mult == 0) return acc;
    x = t;
  }
  // Unresolved tail: use the chord value as the best available guess.
  double chord = flo + (fhi - flo) * (x - lo) / (hi - lo);
  return acc + mult * chord;
}

bool FractalFunction::is_continuous() const {
  // At each interior knot both adjacent cells must give the same value.
  for (size_t j = 1; j + 1 < knots_.size(); ++j) {
    const Rational& x = knots_[j];
    std::vector<Rational> vals;
    for (size_t i = 0; i < u_.size(); ++i) {
      for (const Rational* t : {&lo_, &hi_})
        if (u_[i](*t) == x) vals.push_back(lambda_[i](*t) + s_[i] * (*t == lo_ ? f_lo_ : f_hi_));
    }
    for (auto& v : vals)
      if (v != vals.front()) return false;
  }
  return true;
}

std::vector<std::pair<Rational, Rational>> FractalFunction::sample_exact(int level) const {
  std::map<Rational, Rational> pts{{lo_, f_lo_}, {hi_, f_hi_}};
  for (int l = 0; l < level; ++l) {
    std::map<Rational, Rational> next;
    for (size_t i = 0; i < u_.size(); ++i)
      for (auto& [t, v] : pts) next.emplace(u_[i](t), lambda_[i](t) + s_[i] * v);
    pts = std::move(next);
  }
  return {pts.begin(), pts.end()};
}

std::vector<std::pair<double, double>> FractalFunction::sample(int level) const {
  size_t n = u_.size();
  // Cells in spatial order.
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t p, size_t q) {
    return std::min(u_[p](lo_), u_[p](hi_)) < std::min(u_[q](lo_), u_[q](hi_));
  });
  std::vector<std::vector<double>> lam(n);
  for (size_t i = 0; i < n; ++i)
    for (auto& c : lambda_[i].coeffs()) lam[i].push_back(to_double(c));
  std::vector<std::pair<double, double>> pts{{to_double(lo_), to_double(f_lo_)}, {to_double(hi_), to_double(f_hi_)}};
  for (int l = 0; l < level; ++l) {
    std::vector<std::pair<double, double>> next;
    next.reserve(n * pts.size());
    for (size_t oi = 0; oi < n; ++oi) {
      size_t i = order[oi];
      double a = to_double(u_[i].a), b = to_double(u_[i].b), s = to_double(s_[i]);
      std::vector<std::pair<double, double>> img;
      img.reserve(pts.size());
      for (auto& [t, v] : pts) {
        double lv = 0;
        for (size_t j = lam[i].size(); j-- > 0;) lv = lv * t + lam[i][j];
        img.emplace_back(a * t + b, lv + s * v);
      }
      if (a < 0) std::reverse(img.begin(), img.end());
      // Shared endpoint with the previous cell: keep the earlier value.
      next.insert(next.end(), img.begin() + (oi == 0 ? 0 : 1), img.end());
    }
    pts = std::move(next);
  }
  return pts;
}

FractalFunction combine(const Rational& alpha, const FractalFunction& f, const FractalFunction& g) {
  if (f.size() != g.size() || f.lo() != g.lo() || f.hi() != g.hi()) throw std::invalid_argument("incompatible fractal functions");
  std::vector<Poly1<Rational>> lam;
  for (size_t i = 0; i < f.size(); ++i) {
    if (f.maps()[i].a != g.maps()[i].a || f.maps()[i].b != g.maps()[i].b || f.scalings()[i] != g.scalings()[i])
      throw std::invalid_argument("linear combination needs equal maps and scalings");
    lam.push_back(alpha * f.lambdas()[i] + g.lambdas()[i]);
  }
  return FractalFunction(f.lo(), f.hi(), f.maps(), std::move(lam), f.scalings());
}

// ---------------------------------------------------------------------------

LatticeOperator::LatticeOperator(const FractalFunction& f, int level) {
  if (level < 1) throw std::invalid_argument("lattice level must be >= 1");
  auto prev = f.sample(level - 1);
  auto cur = f.sample(level);
  for (auto& p : cur) x_.push_back(p.first);
  std::vector<double> px;
  for (auto& p : prev) px.push_back(p.first);
  double span = to_double(f.hi()) - to_double(f.lo());
  auto index_of = [&](double v) {
    auto it = std::lower_bound(x_.begin(), x_.end(), v - 1e-12 * span);
    if (it == x_.end() || std::abs(*it - v) > 1e-9 * span) throw std::logic_error("orbit lattice is not nested");
    return static_cast<size_t>(it - x_.begin());
  };
  size_t n = f.size();
  lam_.resize(x_.size());
  s_.resize(x_.size());
  pre_.resize(x_.size());
  std::vector<bool> done(x_.size(), false);
  for (size_t i = 0; i < n; ++i) {
    double a = to_double(f.maps()[i].a), b = to_double(f.maps()[i].b);
    for (double t : px) {
      size_t k = index_of(a * t + b);
      if (done[k]) continue;
      done[k] = true;
      double lv = 0;
      auto& c = f.lambdas()[i].coeffs();
      for (size_t j = c.size(); j-- > 0;) lv = lv * t + to_double(c[j]);
      lam_[k] = lv;
      s_[k] = to_double(f.scalings()[i]);
      pre_[k] = index_of(t);
    }
  }
}

std::vector<double> LatticeOperator::apply(const std::vector<double>& g) const {
  std::vector<double> out(g.size());
  for (size_t k = 0; k < g.size(); ++k) out[k] = lam_[k] + s_[k] * g[pre_[k]];
  return out;
}

double LatticeOperator::residual(const std::vector<double>& g) const {
  auto bg = apply(g);
  double r = 0;
  for (size_t k = 0; k < g.size(); ++k) r = std::max(r, std::abs(bg[k] - g[k]));
  return r;
}

FractalBasis cardinal_basis(Rational lo, Rational hi, const std::vector<Affine1>& u, const std::vector<Rational>& s) {
  FractalBasis basis;
  // Knot set from a throwaway function with zero data.
  std::vector<Poly1<Rational>> zero(u.size());
  FractalFunction probe(lo, hi, u, zero, s);
  basis.knots = probe.knots();
  for (size_t j = 0; j < basis.knots.size(); ++j) {
    std::vector<Rational> y(basis.knots.size(), Rational(0));
    y[j] = 1;
    basis.e.push_back(FractalFunction::interpolating(lo, hi, u, y, s));
  }
  return basis;
}

// ---------------------------------------------------------------------------

namespace {

Rational binom(int n, int k) {
  Rational r(1);
  for (int i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
  return r;
}

void require_same_maps(const FractalFunction& f, const FractalFunction& g) {
  if (f.size() != g.size() || f.lo() != g.lo() || f.hi() != g.hi())
    throw std::invalid_argument("inner product needs a common knot set");
  for (size_t i = 0; i < f.size(); ++i)
    if (f.maps()[i].a != g.maps()[i].a || f.maps()[i].b != g.maps()[i].b)
      throw std::invalid_argument("inner product needs a common knot set");
}

}  // namespace

std::vector<Rational> moments(const FractalFunction& f, int max_power) {
  // M[m] = sum_i |a_i| int_Omega (lambda_i(t) + s_i f(t)) (a_i t + b_i)^m dt.
  std::vector<Rational> m(static_cast<size_t>(max_power) + 1);
  for (int p = 0; p <= max_power; ++p) {
    Rational rhs(0), diag(1);
    for (size_t i = 0; i < f.size(); ++i) {
      const Rational& a = f.maps()[i].a;
      const Rational& b = f.maps()[i].b;
      Rational w = abs_q(a);
      Poly1<Rational> xp = Poly1<Rational>({Rational(1)});
      for (int k = 0; k < p; ++k) xp = xp * Poly1<Rational>::affine(a, b);
      rhs += w * (f.lambdas()[i] * xp).integral(f.lo(), f.hi());
      Rational ak(1);
      for (int k = 0; k <= p; ++k) {
        Rational c = binom(p, k) * ak * Poly1<Rational>::power(b, static_cast<size_t>(p - k));
        if (k < p) rhs += w * f.scalings()[i] * c * m[k];
        else diag -= w * f.scalings()[i] * c;
        ak *= a;
      }
    }
    if (diag == 0) throw std::domain_error("moment recursion is singular");
    m[p] = rhs / diag;
  }
  return m;
}

Rational inner_product(const FractalFunction& f, const FractalFunction& g) {
  require_same_maps(f, g);
  int df = 0, dg = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    df = std::max(df, f.lambdas()[i].degree());
    dg = std::max(dg, g.lambdas()[i].degree());
  }
  auto mf = moments(f, std::max(dg, 0));
  auto mg = moments(g, std::max(df, 0));
  Rational num(0), den(1);
  for (size_t i = 0; i < f.size(); ++i) {
    Rational w = abs_q(f.maps()[i].a);
    const auto& lam = f.lambdas()[i];
    const auto& mu = g.lambdas()[i];
    const Rational& s = f.scalings()[i];
    const Rational& sp = g.scalings()[i];
    Rational lam_g(0), mu_f(0);
    for (size_t k = 0; k < lam.coeffs().size(); ++k) lam_g += lam.coeffs()[k] * mg[k];
    for (size_t k = 0; k < mu.coeffs().size(); ++k) mu_f += mu.coeffs()[k] * mf[k];
    num += w * ((lam * mu).integral(f.lo(), f.hi()) + sp * lam_g + s * mu_f);
    den -= w * s * sp;
  }
  if (den == 0) throw std::domain_error("product recursion is singular");
  return num / den;
}

namespace {

// Midpoint sums of f g over the level-d cells for d = 0..depth.
std::vector<double> midpoint_sums(const FractalFunction& f, const FractalFunction& g, int depth) {
  size_t n = f.size();
  double lo = to_double(f.lo()), hi = to_double(f.hi());
  struct Pt {
    double x, w, fv, gv;
  };
  double m0 = 0.5 * (lo + hi);
  std::vector<Pt> pts{{m0, hi - lo, f.evaluate_double(m0, 80), g.evaluate_double(m0, 80)}};
  std::vector<std::vector<double>> lf(n), lg(n);
  std::vector<double> a(n), b(n), sf(n), sg(n);
  for (size_t i = 0; i < n; ++i) {
    for (auto& c : f.lambdas()[i].coeffs()) lf[i].push_back(to_double(c));
    for (auto& c : g.lambdas()[i].coeffs()) lg[i].push_back(to_double(c));
    a[i] = to_double(f.maps()[i].a);
    b[i] = to_double(f.maps()[i].b);
    sf[i] = to_double(f.scalings()[i]);
    sg[i] = to_double(g.scalings()[i]);
  }
  auto peval = [](const std::vector<double>& c, double t) {
    double v = 0;
    for (size_t j = c.size(); j-- > 0;) v = v * t + c[j];
    return v;
  };
  std::vector<double> sums;
  for (int d = 0;; ++d) {
    double s = 0;
    for (auto& p : pts) s += p.w * p.fv * p.gv;
    sums.push_back(s);
    if (d == depth) break;
    std::vector<Pt> next;
    next.reserve(pts.size() * n);
    for (size_t i = 0; i < n; ++i)
      for (auto& p : pts)
        next.push_back({a[i] * p.x + b[i], std::abs(a[i]) * p.w, peval(lf[i], p.x) + sf[i] * p.fv,
                        peval(lg[i], p.x) + sg[i] * p.gv});
    pts = std::move(next);
  }
  return sums;
}

}  // namespace

double quadrature_inner_product(const FractalFunction& f, const FractalFunction& g, int depth) {
  require_same_maps(f, g);
  auto sums = midpoint_sums(f, g, depth);
  // The midpoint error at level d is a combination of geometric terms
  // rho^d whose ratios are known from the maps: sum |a_i| s_i a_i^j,
  // sum |a_i| s'_i a_i^j (j = 0, 1), sum |a_i| s_i s'_i and the polynomial
  // rate sum |a_i| a_i^2.  Eliminate the dominant ones by solving for the
  // limit together with their coefficients.
  size_t n = f.size();
  std::vector<double> cand(6, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double a = to_double(f.maps()[i].a), w = std::abs(a);
    double s = to_double(f.scalings()[i]), sp = to_double(g.scalings()[i]);
    cand[0] += w * s;
    cand[1] += w * sp;
    cand[2] += w * s * a;
    cand[3] += w * sp * a;
    cand[4] += w * s * sp;
    cand[5] += w * a * a;
  }
  std::vector<double> rates;
  std::sort(cand.begin(), cand.end(), [](double p, double q) { return std::abs(p) > std::abs(q); });
  for (double r : cand) {
    if (std::abs(r) < 1e-3) continue;
    bool dup = false;
    for (double q : rates) dup = dup || std::abs(r - q) < 0.02 * std::abs(q);
    if (!dup) rates.push_back(r);
  }
  size_t k = std::min<size_t>(rates.size(), static_cast<size_t>(depth));
  if (k == 0) return sums.back();
  // Unknowns: I, c_1..c_k; equations Q_d = I + sum c_r rho_r^d for the
  // last k+1 levels.
  Eigen::MatrixXd m(k + 1, k + 1);
  Eigen::VectorXd rhs(k + 1);
  for (size_t e = 0; e <= k; ++e) {
    int d = depth - static_cast<int>(e);
    m(e, 0) = 1;
    for (size_t r = 0; r < k; ++r) m(e, r + 1) = std::pow(rates[r], d);
    rhs(e) = sums[static_cast<size_t>(d)];
  }
  Eigen::VectorXd sol = m.colPivHouseholderQr().solve(rhs);
  return sol(0);
}

GramResult gram_matrix(const std::vector<FractalFunction>& basis, GramMethod method, int depth) {
  size_t n = basis.size();
  GramResult res;
  res.gram = Mat<double>(n, n);
  if (method == GramMethod::MomentRecursion) {
    try {
      res.exact = Mat<Rational>(n, n);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
          Rational v = inner_product(basis[i], basis[j]);
          res.exact(i, j) = res.exact(j, i) = v;
          res.gram(i, j) = res.gram(j, i) = to_double(v);
        }
      res.method_used = GramMethod::MomentRecursion;
      return res;
    } catch (const std::domain_error& e) {
      res.warning = std::string("moment recursion failed (") + e.what() + "); using quadrature";
      res.exact = Mat<Rational>();
    }
  }
  res.method_used = GramMethod::Quadrature;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) res.gram(i, j) = res.gram(j, i) = quadrature_inner_product(basis[i], basis[j], depth);
  return res;
}

Mat<double> orthonormalize(const Mat<double>& g) {
  size_t n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("Gram matrix must be square");
  Mat<double> q(n, n);
  auto inner = [&](size_t a, size_t b) {  // <q_a, q_b>_G for columns
    double s = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) s += q(i, a) * g(i, j) * q(j, b);
    return s;
  };
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) q(i, k) = i == k ? 1.0 : 0.0;
    // Two passes of classical Gram-Schmidt for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (size_t j = 0; j < k; ++j) {
        double c = inner(j, k);
        for (size_t i = 0; i < n; ++i) q(i, k) -= c * q(i, j);
      }
    double nn = inner(k, k);
    if (!(nn > 1e-14 * std::max(1.0, std::abs(g(k, k))))) throw std::domain_error("Gram matrix is not positive definite");
    double s = 1 / std::sqrt(nn);
    for (size_t i = 0; i < n; ++i) q(i, k) *= s;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Fixtures

namespace {

FractalFunction uniform_three_cell(PartitionMode mode, const Rational& middle_slope, const Rational& middle_const) {
  const Rational s(1, 2);
  const Rational edge_slope = Rational(1, 3) - s / 2;
  std::vector<Poly1<Rational>> lambda = {
      Poly1<Rational>::affine(edge_slope, 0),
      Poly1<Rational>::affine(middle_slope - s / 2, middle_const),
      Poly1<Rational>::affine(edge_slope, Rational(1, 2)),
  };
  return FractalFunction(0, 3, build_maps(mode, 3), std::move(lambda), {s, s, s});
}

}  // namespace

FractalFunction fif_fixture(const std::string& name) {
  if (name == "ex3.3") {
    return FractalFunction::from_ifs(coefficients_from_interpolation(
        {{0, 0}, {Rational(1, 2), Rational(7, 10)}, {1, 0}}, {Rational(3, 5), Rational(2, 5)}));
  }
  if (name == "ex3.5-translation") return uniform_three_cell(PartitionMode::Translation, Rational(-1, 6), 1);
  if (name == "ex3.5-reflection") return uniform_three_cell(PartitionMode::Reflection, Rational(1, 6), Rational(1, 2));
  if (name == "ex3.5-reflection-literal") return uniform_three_cell(PartitionMode::Reflection, Rational(1, 6), 1);
  throw std::invalid_argument("unknown fractal function fixture: " + name);
}

std::vector<std::string> fif_fixture_names() {
  return {"ex3.3", "ex3.5-translation", "ex3.5-reflection", "ex3.5-reflection-literal"};
}

}  // namespace cwave

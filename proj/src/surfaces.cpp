#include "cwave/surfaces.hpp"

#include <deque>
#include <functional>
#include <set>

namespace cwave {

namespace {

using Q = Rational;
using VQ = Vec<Rational>;

std::string point_key(const VQ& p) { return to_string(p); }

Poly1<Q> on_segment(const Poly<Q>& p, const VQ& a, const VQ& b) { return p.restrict_segment(a, b); }

double poly_bound(const Poly<Q>& p, double r) {
  double b = 0;
  for (auto& [e, c] : p.terms()) {
    int d = 0;
    for (int k : e) d += k;
    b += std::abs(to_double(c)) * std::pow(r, d);
  }
  return b;
}

bool is_simplex(const FoldableFigure<Q>& f) { return f.vertices.size() == f.dim() + 1; }

}  // namespace

void SurfaceSpec::check() const {
  if (maps.empty()) throw std::invalid_argument("surface spec needs at least one map");
  if (lambda.size() != maps.size()) throw std::invalid_argument("one data polynomial per map is required");
  if (abs_q(s) >= 1) throw std::invalid_argument("scaling must satisfy |s| < 1");
  for (auto& u : maps) {
    if (u.dim() != delta.dim()) throw std::invalid_argument("map dimension mismatch");
    for (auto& v : delta.vertices)
      if (!delta.contains(u(v))) throw std::invalid_argument("map does not send the domain into itself");
  }
  for (auto& l : lambda) {
    if (l.nvars() != delta.dim()) throw std::invalid_argument("data polynomial arity mismatch");
    if (l.degree() > degree) throw std::invalid_argument("data polynomial exceeds the declared degree");
  }
}

SurfaceSpec make_spec(const Subdivision<Rational>& sub, Rational s, std::vector<Poly<Rational>> lambda, std::string name) {
  SurfaceSpec spec;
  spec.name = std::move(name);
  spec.delta = sub.delta;
  spec.maps = sub.maps;
  spec.s = std::move(s);
  spec.lambda = std::move(lambda);
  spec.degree = 1;
  for (auto& l : spec.lambda) spec.degree = std::max(spec.degree, l.degree());
  spec.check();
  return spec;
}

SurfaceSpec fixture_triangle_surface() {
  SurfaceSpec spec;
  spec.name = "ex5.2";
  spec.delta = right_triangle();
  Q h(1, 2);
  auto m = [&](Q a, Q b, Q c, Q d, Q e, Q f) { return AffineMap<Q>(Mat<Q>{{a, b}, {c, d}}, VQ{e, f}); };
  spec.maps = {m(h, 0, 0, h, h, 0), m(-h, 0, 0, h, h, 0), m(h, 0, 0, -h, 0, h), m(h, 0, 0, h, 0, h)};
  spec.s = Q(3, 5);
  Poly<Q> l12 = Poly<Q>::affine(Q(1, 5), VQ{Q(-1, 5), Q(3, 10)});
  Poly<Q> l34 = Poly<Q>::affine(Q(3, 10), VQ{Q(1, 5), Q(-3, 10)});
  spec.lambda = {l12, l12, l34, l34};
  spec.degree = 1;
  spec.check();
  return spec;
}

SurfaceSpec surface_fixture(const std::string& name) {
  if (name == "ex5.2") return fixture_triangle_surface();
  throw std::invalid_argument("unknown surface fixture '" + name + "'");
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> monomial_exponents(size_t nvars, int degree) {
  std::vector<std::vector<int>> out;
  // Exponent vectors of total degree t, first variable descending.
  std::function<void(size_t, int, std::vector<int>&)> rec = [&](size_t k, int left, std::vector<int>& e) {
    if (k + 1 == nvars) {
      e[k] = left;
      out.push_back(e);
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[k] = a;
      rec(k + 1, left - a, e);
    }
  };
  for (int t = 0; t <= degree; ++t) {
    std::vector<int> e(nvars, 0);
    rec(0, t, e);
  }
  return out;
}

std::vector<Rational> data_vector(const SurfaceSpec& spec) {
  auto mons = monomial_exponents(spec.delta.dim(), spec.degree);
  std::vector<Q> x;
  for (auto& l : spec.lambda)
    for (auto& e : mons) x.push_back(l.coeff(e));
  return x;
}

std::vector<Poly<Rational>> data_from_vector(size_t nvars, int degree, size_t ncells, const std::vector<Rational>& x) {
  auto mons = monomial_exponents(nvars, degree);
  if (x.size() != ncells * mons.size()) throw std::invalid_argument("data vector has the wrong length");
  std::vector<Poly<Q>> out;
  for (size_t i = 0; i < ncells; ++i) {
    Poly<Q> p(nvars);
    for (size_t m = 0; m < mons.size(); ++m) p.add_term(mons[m], x[i * mons.size() + m]);
    out.push_back(p);
  }
  return out;
}

namespace {

// A polynomial in t whose coefficients are linear in the data vector:
// entry b is the polynomial multiplying data coordinate b.
using HForm = std::vector<Poly1<Q>>;

HForm h_zero(size_t k) { return HForm(k); }
HForm h_add(HForm a, const HForm& b, const Q& cb = 1) {
  for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] + cb * b[i];
  return a;
}
HForm h_scale(HForm a, const Q& c) {
  for (auto& p : a) p = c * p;
  return a;
}
HForm h_compose(HForm a, const Q& alpha, const Q& beta) {
  for (auto& p : a) p = p.compose_affine(alpha, beta);
  return a;
}

}  // namespace

ContinuityConstraints continuity_constraints(const FoldableFigure<Rational>& delta,
                                             const std::vector<AffineMap<Rational>>& maps, const Rational& s,
                                             int degree, int kappa) {
  if (delta.dim() != 2) throw std::invalid_argument("face conditions are implemented for planar domains");
  size_t n = maps.size();
  auto mons = monomial_exponents(2, degree);
  size_t mcount = mons.size();
  size_t K = n * mcount;
  std::vector<Poly<Q>> mono_polys;
  for (auto& e : mons) {
    Poly<Q> p(2);
    p.add_term(e, 1);
    mono_polys.push_back(p);
  }
  // lambda_m restricted to a0 -> a1 as a form in the data.
  auto lam = [&](size_t m, const VQ& a0, const VQ& a1) {
    HForm h = h_zero(K);
    for (size_t k = 0; k < mcount; ++k) h[m * mcount + k] = mono_polys[k].restrict_segment(a0, a1);
    return h;
  };

  std::vector<AffineMap<Q>> inv;
  std::vector<std::vector<VQ>> cells(n);
  for (size_t m = 0; m < n; ++m) {
    inv.push_back(maps[m].inverse());
    for (auto& v : delta.vertices) cells[m].push_back(maps[m](v));
  }
  auto has_vertex = [&](size_t m, const VQ& p) {
    for (auto& v : cells[m])
      if (v == p) return true;
    return false;
  };
  auto cell_with_edge = [&](const VQ& p, const VQ& q) -> size_t {
    for (size_t m = 0; m < n; ++m)
      if (has_vertex(m, p) && has_vertex(m, q)) return m;
    throw std::logic_error("boundary piece " + to_string(p) + "-" + to_string(q) + " is not a subcell edge");
  };

  ContinuityConstraints out;
  auto emit = [&](const HForm& h, size_t fi, size_t fj) {
    int deg = 0;
    for (auto& p : h) deg = std::max(deg, p.degree());
    for (int k = 0; k <= deg; ++k) {
      std::vector<Q> row(K);
      bool nz = false;
      for (size_t b = 0; b < K; ++b) {
        row[b] = h[b].coeff(static_cast<size_t>(k));
        nz = nz || row[b] != 0;
      }
      if (nz) {
        out.rows.push_back(std::move(row));
        out.origin.emplace_back(fi, fj);
      }
    }
  };

  struct Pair {
    VQ p0, p1, q0, q1;
    HForm h;  // f(P(t)) - f(Q(t)) = h(t)
    size_t fi, fj;
  };
  std::deque<Pair> queue;
  std::map<std::string, HForm> memo;
  auto key_of = [](const VQ& a, const VQ& b, const VQ& c, const VQ& d) {
    return point_key(a) + point_key(b) + "|" + point_key(c) + point_key(d);
  };
  auto submit = [&](Pair pr) {
    // The four equivalent forms of the statement.
    HForm rev = h_compose(pr.h, Q(-1), Q(1));
    std::pair<std::string, HForm> forms[4] = {
        {key_of(pr.p0, pr.p1, pr.q0, pr.q1), pr.h},
        {key_of(pr.p1, pr.p0, pr.q1, pr.q0), rev},
        {key_of(pr.q0, pr.q1, pr.p0, pr.p1), h_scale(pr.h, Q(-1))},
        {key_of(pr.q1, pr.q0, pr.p1, pr.p0), h_scale(rev, Q(-1))},
    };
    std::string best = forms[0].first;
    for (auto& f : forms) best = std::min(best, f.first);
    const HForm* canon = nullptr;
    for (auto& f : forms) {
      if (f.first != best) continue;
      if (!canon) canon = &f.second;
      else emit(h_add(f.second, *canon, Q(-1)), pr.fi, pr.fj);  // self-symmetric pair
    }
    if (pr.p0 == pr.q0 && pr.p1 == pr.q1) {
      emit(pr.h, pr.fi, pr.fj);  // f(P) - f(P) = 0
      return;
    }
    auto it = memo.find(best);
    if (it != memo.end()) {
      emit(h_add(*canon, it->second, Q(-1)), pr.fi, pr.fj);
      return;
    }
    memo.emplace(best, *canon);
    queue.push_back(std::move(pr));
  };

  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      std::vector<VQ> common;
      for (auto& v : cells[i])
        if (has_vertex(j, v)) common.push_back(v);
      if (common.size() != 2) continue;  // cells meeting in a vertex only
      VQ a0 = inv[i](common[0]), a1 = inv[i](common[1]);
      VQ b0 = inv[j](common[0]), b1 = inv[j](common[1]);
      HForm diff = h_add(lam(i, a0, a1), lam(j, b0, b1), Q(-1));
      if (s == 0) {
        emit(diff, i, j);
        continue;
      }
      submit({a0, a1, b0, b1, h_scale(diff, Q(-1) / s), i, j});
    }

  Q k(kappa);
  while (!queue.empty()) {
    Pair o = queue.front();
    queue.pop_front();
    VQ dp = o.p1 - o.p0, dq = o.q1 - o.q0;
    for (int piece = 0; piece < kappa; ++piece) {
      Q t0 = Q(piece) / k, t1 = Q(piece + 1) / k;
      VQ pa = o.p0 + t0 * dp, pb = o.p0 + t1 * dp;
      VQ qa = o.q0 + t0 * dq, qb = o.q0 + t1 * dq;
      size_t m = cell_with_edge(pa, pb);
      size_t mq = cell_with_edge(qa, qb);
      VQ a0 = inv[m](pa), a1 = inv[m](pb), b0 = inv[mq](qa), b1 = inv[mq](qb);
      // h((piece + tau)/kappa) - lambda_m(A(tau)) + lambda_mq(B(tau)), over s.
      HForm child = h_compose(o.h, Q(1) / k, t0);
      child = h_add(child, lam(m, a0, a1), Q(-1));
      child = h_add(child, lam(mq, b0, b1));
      submit({a0, a1, b0, b1, h_scale(child, Q(1) / s), o.fi, o.fj});
    }
  }
  out.face_pairs = memo.size();
  return out;
}

namespace {

int similarity_kappa(const SurfaceSpec& spec) {
  Q adet = abs_q(determinant(spec.maps.front().linear()));
  Q r = adet;
  for (int kk = 2; kk <= 64; ++kk) {
    Q p(1);
    for (size_t i = 0; i < spec.delta.dim(); ++i) p *= kk;
    if (r * p == 1) return kk;
  }
  throw std::invalid_argument("maps are not similitudes with ratio 1/kappa");
}

}  // namespace

ConditionReport validate_condition_star(const SurfaceSpec& spec) {
  spec.check();
  ConditionReport rep;
  int kappa = similarity_kappa(spec);
  auto cons = continuity_constraints(spec.delta, spec.maps, spec.s, spec.degree, kappa);
  auto x = data_vector(spec);
  std::set<std::pair<size_t, size_t>> reported;
  for (size_t r = 0; r < cons.rows.size(); ++r) {
    ++rep.constraints_checked;
    Q v(0);
    for (size_t b = 0; b < x.size(); ++b) v += cons.rows[r][b] * x[b];
    if (v != 0) {
      rep.ok = false;
      auto [i, j] = cons.origin[r];
      if (reported.insert({i, j}).second)
        rep.violations.push_back({i + 1, j + 1, "continuity", "one-sided limits of the fixed point differ on this face"});
    }
  }
  // Literal face condition.
  size_t n = spec.size();
  std::vector<AffineMap<Q>> inv;
  for (auto& u : spec.maps) inv.push_back(u.inverse());
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      std::vector<VQ> common;
      for (auto& v : spec.delta.vertices)
        for (auto& w : spec.delta.vertices)
          if (spec.maps[i](v) == spec.maps[j](w)) common.push_back(spec.maps[i](v));
      if (common.size() != 2) continue;
      VQ a0 = inv[i](common[0]), a1 = inv[i](common[1]);
      VQ b0 = inv[j](common[0]), b1 = inv[j](common[1]);
      bool same_set = (a0 == b0 && a1 == b1) || (a0 == b1 && a1 == b0);
      bool same_data = on_segment(spec.lambda[i], a0, a1) == on_segment(spec.lambda[j], a0, a1);
      if (!same_set || !same_data) {
        rep.literal_ok = false;
        rep.literal_violations.push_back(
            {i + 1, j + 1, "literal",
             !same_set ? "preimages differ: " + to_string(a0) + "-" + to_string(a1) + " vs " + to_string(b0) + "-" +
                             to_string(b1)
                       : "lambda_" + std::to_string(i + 1) + " != lambda_" + std::to_string(j + 1) +
                             " on the common preimage"});
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------

FractalSurface::FractalSurface(SurfaceSpec spec) : spec_(std::move(spec)) {
  spec_.check();
  for (auto& u : spec_.maps) inv_.push_back(u.inverse());
  // Vertex system: each vertex V of Delta is u_m(V') for a vertex V'.
  const auto& verts = spec_.delta.vertices;
  size_t nv = verts.size();
  Mat<Q> m(nv, nv);
  Vec<Q> rhs(nv);
  for (size_t k = 0; k < nv; ++k) {
    bool found = false;
    for (size_t i = 0; i < spec_.size() && !found; ++i)
      for (size_t l = 0; l < nv && !found; ++l)
        if (spec_.maps[i](verts[l]) == verts[k]) {
          m(k, k) += 1;
          m(k, l) -= spec_.s;
          rhs[k] = spec_.lambda[i](verts[l]);
          found = true;
        }
    if (!found) throw std::invalid_argument("a vertex of the domain is not the image of a vertex");
  }
  Vec<Q> v = solve(m, rhs);
  base_.assign(v.begin(), v.end());
}

std::vector<MeshCell> FractalSurface::mesh(int depth) const {
  if (depth < 0) throw std::invalid_argument("negative depth");
  double count = std::pow(static_cast<double>(spec_.size()), depth);
  if (count > 4e6) throw std::invalid_argument("mesh depth too large");
  std::vector<MeshCell> leaves{{{}, spec_.delta.vertices, base_}};
  for (int d = 0; d < depth; ++d) {
    std::vector<MeshCell> next;
    next.reserve(leaves.size() * spec_.size());
    for (size_t i = 0; i < spec_.size(); ++i)
      for (auto& c : leaves) {
        MeshCell nc;
        nc.word.reserve(c.word.size() + 1);
        nc.word.push_back(static_cast<int>(i));
        nc.word.insert(nc.word.end(), c.word.begin(), c.word.end());
        for (size_t k = 0; k < c.points.size(); ++k) {
          nc.points.push_back(spec_.maps[i](c.points[k]));
          nc.values.push_back(spec_.lambda[i](c.points[k]) + spec_.s * c.values[k]);
        }
        next.push_back(std::move(nc));
      }
    leaves = std::move(next);
  }
  return leaves;
}

std::map<Vec<Rational>, Rational> FractalSurface::vertex_table(int depth, Rational* max_jump) const {
  std::map<VQ, Q> table;
  Q jump(0);
  for (auto& c : mesh(depth))
    for (size_t k = 0; k < c.points.size(); ++k) {
      auto [it, fresh] = table.emplace(c.points[k], c.values[k]);
      if (!fresh) jump = std::max(jump, abs_q(it->second - c.values[k]));
    }
  if (max_jump) *max_jump = jump;
  return table;
}

double FractalSurface::sup_bound() const {
  double r = 0;
  for (auto& v : spec_.delta.vertices)
    for (auto& x : v) r = std::max(r, std::abs(to_double(x)));
  double lmax = 0;
  for (auto& l : spec_.lambda) lmax = std::max(lmax, poly_bound(l, r));
  return lmax / (1 - std::abs(to_double(spec_.s)));
}

EvalResult FractalSurface::evaluate(const Vec<Rational>& x0, int depth) const {
  if (!spec_.delta.contains(x0)) throw std::out_of_range("point outside the domain");
  Q acc(0), mult(1);
  VQ x = x0;
  for (int k = 0;; ++k) {
    for (size_t v = 0; v < spec_.delta.vertices.size(); ++v)
      if (x == spec_.delta.vertices[v]) {
        Q val = acc + mult * base_[v];
        return {true, val, {to_double(val), 0}};
      }
    if (k >= depth) break;
    size_t i = 0;
    while (i < inv_.size() && !spec_.delta.contains(inv_[i](x))) ++i;
    if (i == inv_.size()) throw std::logic_error("subcells do not cover the domain");
    VQ t = inv_[i](x);
    acc += mult * spec_.lambda[i](t);
    mult *= spec_.s;
    if (mult == 0) return {true, acc, {to_double(acc), 0}};
    x = t;
  }
  return {false, Q(0), {to_double(acc), std::abs(to_double(mult)) * sup_bound()}};
}

double FractalSurface::evaluate_double(const Vec<double>& x0, int depth) const {
  size_t n = spec_.delta.dim();
  std::vector<AffineMap<double>> inv;
  for (auto& g : inv_) inv.push_back(convert<double>(g));
  std::vector<Poly<double>> lam;
  for (auto& l : spec_.lambda) lam.push_back(convert<double>(l));
  std::vector<Hyperplane<double>> walls;
  for (auto& w : spec_.delta.walls) walls.emplace_back(convert<double>(w.normal), to_double(w.offset));
  auto inside = [&](const Vec<double>& p) {
    for (auto& w : walls)
      if (w.side(p) > 1e-12) return false;
    return true;
  };
  double s = to_double(spec_.s);
  double acc = 0, mult = 1;
  Vec<double> x = x0;
  for (int k = 0; k < depth; ++k) {
    size_t i = 0;
    while (i < inv.size() && !inside(inv[i](x))) ++i;
    if (i == inv.size()) throw std::out_of_range("point outside the domain");
    Vec<double> t = inv[i](x);
    acc += mult * lam[i](t);
    mult *= s;
    if (mult == 0) return acc;
    x = t;
  }
  // Tail: barycentric interpolation of the vertex values on a simplex,
  // otherwise the vertex mean.
  double tail = 0;
  const auto& verts = spec_.delta.vertices;
  if (verts.size() == n + 1) {
    Mat<double> m(n + 1, n + 1);
    Vec<double> rhs(n + 1);
    for (size_t v = 0; v <= n; ++v) {
      m(0, v) = 1;
      for (size_t c = 0; c < n; ++c) m(c + 1, v) = to_double(verts[v][c]);
    }
    rhs[0] = 1;
    for (size_t c = 0; c < n; ++c) rhs[c + 1] = x[c];
    Vec<double> bary = solve(m, rhs);
    for (size_t v = 0; v <= n; ++v) tail += bary[v] * to_double(base_[v]);
  } else {
    for (auto& b : base_) tail += to_double(b);
    tail /= static_cast<double>(base_.size());
  }
  return acc + mult * tail;
}

FractalSurface fixed_point(const SurfaceSpec& spec) {
  auto rep = validate_condition_star(spec);
  if (!rep.ok) {
    std::string msg = "face condition violated on";
    for (auto& v : rep.violations) msg += " (" + std::to_string(v.i) + "," + std::to_string(v.j) + ")";
    throw std::invalid_argument(msg);
  }
  return FractalSurface(spec);
}

// ---------------------------------------------------------------------------

std::vector<Poly<Rational>> data_from_vertex_values(const FoldableFigure<Rational>& delta,
                                                    const std::vector<AffineMap<Rational>>& maps, const Rational& s,
                                                    const std::map<Vec<Rational>, Rational>& z) {
  if (!is_simplex(delta)) throw std::invalid_argument("vertex-value data needs a simplex domain");
  size_t n = delta.dim();
  auto zval = [&](const VQ& p) {
    auto it = z.find(p);
    if (it == z.end()) throw std::invalid_argument("no value prescribed at " + to_string(p));
    return it->second;
  };
  // lambda(x) = c0 + g.x ; rows [1, V_k] (c0, g) = target_k
  Mat<Q> m(n + 1, n + 1);
  for (size_t k = 0; k <= n; ++k) {
    m(k, 0) = 1;
    for (size_t c = 0; c < n; ++c) m(k, c + 1) = delta.vertices[k][c];
  }
  Mat<Q> minv = inverse(m);
  std::vector<Poly<Q>> out;
  for (auto& u : maps) {
    Vec<Q> target(n + 1);
    for (size_t k = 0; k <= n; ++k) target[k] = zval(u(delta.vertices[k])) - s * zval(delta.vertices[k]);
    Vec<Q> coef = minv * target;
    VQ g(n);
    for (size_t c = 0; c < n; ++c) g[c] = coef[c + 1];
    out.push_back(Poly<Q>::affine(coef[0], g));
  }
  return out;
}

BasisFamily basis_surfaces(const SurfaceSpec& templ) {
  BasisFamily fam;
  std::set<VQ> verts;
  for (auto& u : templ.maps)
    for (auto& v : templ.delta.vertices) verts.insert(u(v));
  fam.vertices.assign(verts.begin(), verts.end());
  for (size_t nu = 0; nu < fam.vertices.size(); ++nu) {
    std::map<VQ, Q> z;
    for (size_t k = 0; k < fam.vertices.size(); ++k) z[fam.vertices[k]] = k == nu ? Q(1) : Q(0);
    SurfaceSpec spec = templ;
    spec.name = templ.name + "_phi" + std::to_string(nu);
    spec.lambda = data_from_vertex_values(templ.delta, templ.maps, templ.s, z);
    spec.degree = 1;
    fam.reports.push_back(validate_condition_star(spec));
    fam.specs.push_back(std::move(spec));
  }
  return fam;
}

std::vector<MeshCell> RefinedSurface::mesh(int depth) const {
  const auto& spec = base.spec();
  auto leaves = base.mesh(depth);
  for (auto& c : leaves)
    for (size_t r = word.size(); r-- > 0;) {
      size_t i = static_cast<size_t>(word[r]);
      for (size_t k = 0; k < c.points.size(); ++k) {
        c.values[k] = spec.lambda[i](c.points[k]) + spec.s * c.values[k];
        c.points[k] = spec.maps[i](c.points[k]);
      }
      c.word.insert(c.word.begin(), word[r]);
    }
  return leaves;
}

EvalResult RefinedSurface::evaluate(const Vec<Rational>& x0, int depth) const {
  const auto& spec = base.spec();
  Q acc(0), mult(1);
  VQ x = x0;
  for (int i : word) {
    VQ t = spec.maps[static_cast<size_t>(i)].inverse()(x);
    if (!spec.delta.contains(t)) throw std::out_of_range("point outside the refined cell");
    acc += mult * spec.lambda[static_cast<size_t>(i)](t);
    mult *= spec.s;
    x = t;
  }
  EvalResult r = base.evaluate(x, depth);
  EvalResult out;
  out.exact = r.exact;
  if (r.exact) out.value = acc + mult * r.value;
  out.enclosure = {to_double(acc) + to_double(mult) * r.enclosure.mid, std::abs(to_double(mult)) * r.enclosure.rad};
  return out;
}

std::vector<RefinedSurface> refine_basis(const std::vector<int>& word, const std::vector<FractalSurface>& basis) {
  std::vector<RefinedSurface> out;
  for (auto& b : basis) {
    for (int i : word)
      if (i < 0 || static_cast<size_t>(i) >= b.spec().size()) throw std::out_of_range("invalid multi-index");
    out.push_back({b, word});
  }
  return out;
}

double mesh_inner_product(const std::vector<MeshCell>& f, const std::vector<MeshCell>& g) {
  if (f.size() != g.size()) throw std::invalid_argument("meshes differ");
  double sum = 0;
  for (size_t c = 0; c < f.size(); ++c) {
    const auto& pts = f[c].points;
    double area = std::abs(to_double(polygon_area(pts)));
    double acc = 0;
    for (size_t k = 0; k < pts.size(); ++k) acc += to_double(f[c].values[k]) * to_double(g[c].values[k]);
    sum += area * acc / static_cast<double>(pts.size());
  }
  return sum;
}

// ---------------------------------------------------------------------------

GlobalSurface::GlobalSurface(FoldableFigure<Rational> delta, std::map<std::string, SurfaceSpec> table)
    : delta_(std::move(delta)) {
  for (auto& [k, spec] : table) table_.emplace(k, FractalSurface(spec));
}

GlobalSurface GlobalSurface::constant(const SurfaceSpec& spec) {
  GlobalSurface g(spec.delta, {});
  g.fallback_.emplace(spec);
  return g;
}

void GlobalSurface::require_region(const Box<Rational>& region) const {
  if (fallback_) return;
  for (auto& c : enumerate_group(delta_, region))
    if (!table_.count(element_key(c.element.iso))) throw std::out_of_range("missing word entry");
}

std::optional<double> GlobalSurface::evaluate(const Vec<Rational>& x, int depth) const {
  auto [y, w] = fold(delta_, x);
  if (delta_.on_boundary(y)) return std::nullopt;
  auto it = table_.find(element_key(w.iso));
  const FractalSurface* f = nullptr;
  if (it != table_.end()) f = &it->second;
  else if (fallback_) f = &*fallback_;
  else throw std::out_of_range("missing word entry");
  return f->evaluate_double(convert<double>(y), depth);
}

GlobalSurface extend_global(const FoldableFigure<Rational>& delta, std::map<std::string, SurfaceSpec> table,
                            const Box<Rational>& region) {
  GlobalSurface g(delta, std::move(table));
  g.require_region(region);
  return g;
}

// ---------------------------------------------------------------------------

namespace {

Q factorial(int k) {
  Q r(1);
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// int over the triangle (a, b, c) of p.
Q triangle_integral(const Poly<Q>& p, const VQ& a, const VQ& b, const VQ& c) {
  VQ e1 = b - a, e2 = c - a;
  AffineMap<Q> g(Mat<Q>{{e1[0], e2[0]}, {e1[1], e2[1]}}, a);
  Q jac = abs_q(determinant(g.linear()));
  if (jac == 0) return Q(0);
  // int over {u, v >= 0, u + v <= 1} of u^p v^q = p! q! / (p + q + 2)!
  Q r(0);
  Poly<Q> pg = p.compose(g);
  for (auto& [e, coef] : pg.terms()) r += coef * factorial(e[0]) * factorial(e[1]) / factorial(e[0] + e[1] + 2);
  return jac * r;
}

void same_system(const SurfaceSpec& f, const SurfaceSpec& g) {
  if (f.maps != g.maps || f.s != g.s || f.delta.vertices != g.delta.vertices)
    throw std::invalid_argument("surfaces must share the domain, maps and scaling");
}

}  // namespace

Rational polygon_integral(const Poly<Rational>& p, const std::vector<Vec<Rational>>& polygon) {
  if (polygon.size() < 3 || polygon.front().dim() != 2) throw std::invalid_argument("planar polygon expected");
  if (p.nvars() != 2) throw std::invalid_argument("polynomial arity mismatch");
  Q r(0);
  for (size_t k = 1; k + 1 < polygon.size(); ++k) r += triangle_integral(p, polygon[0], polygon[k], polygon[k + 1]);
  return r;
}

std::vector<Rational> surface_moments(const SurfaceSpec& spec, int max_degree) {
  spec.check();
  if (spec.delta.dim() != 2) throw std::invalid_argument("moments are implemented for planar domains");
  auto mons = monomial_exponents(2, max_degree);
  size_t m = mons.size();
  std::map<std::vector<int>, size_t> index;
  for (size_t k = 0; k < m; ++k) index[mons[k]] = k;
  // (I - s sum_i det_i C_i) M = b, where m o u_i = sum_m' C_i[m][m'] m'.
  Mat<Q> sys = Mat<Q>::identity(m);
  Vec<Q> b(m);
  for (size_t i = 0; i < spec.size(); ++i) {
    const auto& u = spec.maps[i];
    Q det = abs_q(determinant(u.linear()));
    for (size_t k = 0; k < m; ++k) {
      Poly<Q> mono(2);
      mono.add_term(mons[k], 1);
      Poly<Q> mu = mono.compose(u);
      b[k] += det * polygon_integral(spec.lambda[i] * mu, spec.delta.vertices);
      for (auto& [e, c] : mu.terms()) sys(k, index.at(e)) -= spec.s * det * c;
    }
  }
  if (determinant(sys) == 0) throw std::domain_error("singular moment recursion");
  Vec<Q> x = solve(sys, b);
  return std::vector<Q>(x.begin(), x.end());
}

Rational surface_poly_integral(const std::vector<Rational>& moments, int max_degree, const Poly<Rational>& p) {
  auto mons = monomial_exponents(2, max_degree);
  if (moments.size() != mons.size()) throw std::invalid_argument("moment vector has the wrong length");
  if (p.degree() > max_degree) throw std::invalid_argument("polynomial degree exceeds the available moments");
  Q r(0);
  for (size_t k = 0; k < mons.size(); ++k) r += p.coeff(mons[k]) * moments[k];
  return r;
}

Rational surface_inner_product(const SurfaceSpec& f, const SurfaceSpec& g) {
  same_system(f, g);
  int deg = std::max(f.degree, g.degree);
  auto mf = surface_moments(f, 2 * deg);
  auto mg = surface_moments(g, 2 * deg);
  // <f,g> = sum_i det_i int (lambda_i + s f)(mu_i + s g) over Delta.
  Q rest(0), dsum(0);
  for (size_t i = 0; i < f.size(); ++i) {
    Q det = abs_q(determinant(f.maps[i].linear()));
    dsum += det;
    Q t = polygon_integral(f.lambda[i] * g.lambda[i], f.delta.vertices) +
          f.s * surface_poly_integral(mf, 2 * deg, g.lambda[i]) + f.s * surface_poly_integral(mg, 2 * deg, f.lambda[i]);
    rest += det * t;
  }
  Q denom = 1 - f.s * f.s * dsum;
  if (denom == 0) throw std::domain_error("singular inner-product recursion");
  return rest / denom;
}

}  // namespace cwave

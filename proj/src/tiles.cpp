#include "cwave/tiles.hpp"

#include "cwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cwave {

namespace {

constexpr long kMaxDilationPower = 200;

RBox map_box(const RBox& b, const AffineMap<Rational>& g) {
  return DyadicBoxSet::from_disjoint(b.dim(), {b}).transform(g).boxes().front();
}

// Open-box overlap of two boxes (positive-measure intersection).
bool meet(const RBox& a, const RBox& b) {
  for (size_t i = 0; i < a.dim(); ++i)
    if (!(a.lo[i] < b.hi[i] && b.lo[i] < a.hi[i])) return false;
  return true;
}

bool closure_contains(const DyadicBoxSet& s, const Vec<Rational>& x) {
  for (const auto& b : s.boxes()) {
    bool in = true;
    for (size_t i = 0; i < b.dim() && in; ++i) in = b.lo[i] <= x[i] && x[i] <= b.hi[i];
    if (in) return true;
  }
  return false;
}

long floor_q(const Rational& q) {
  BigInt n = boost::multiprecision::numerator(q), d = boost::multiprecision::denominator(q);
  BigInt f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f.convert_to<long>();
}

bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

// Integer vectors in a product of ranges, ordered by l1 norm then
// lexicographically.
std::vector<std::vector<long>> ordered_indices(const std::vector<std::pair<long, long>>& ranges) {
  std::vector<std::vector<long>> out{{}};
  for (const auto& [a, b] : ranges) {
    std::vector<std::vector<long>> next;
    for (const auto& v : out)
      for (long x = a; x <= b; ++x) {
        auto w = v;
        w.push_back(x);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  auto norm = [](const std::vector<long>& v) {
    long s = 0;
    for (long x : v) s += std::labs(x);
    return s;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& u, const auto& v) {
    long nu = norm(u), nv = norm(v);
    return nu != nv ? nu < nv : u < v;
  });
  return out;
}

Rational lcm_q(const Rational& a, const Rational& b) {
  BigInt an = boost::multiprecision::numerator(a), ad = boost::multiprecision::denominator(a);
  BigInt bn = boost::multiprecision::numerator(b), bd = boost::multiprecision::denominator(b);
  BigInt num = boost::multiprecision::lcm(an, bn), den = boost::multiprecision::gcd(ad, bd);
  return Rational(num, den);
}

}  // namespace

std::string to_string(GroupKind k) {
  switch (k) {
    case GroupKind::Translation: return "translation";
    case GroupKind::Dilation: return "dilation";
    case GroupKind::Weyl: return "weyl";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec GroupSpec::translations(std::vector<Vec<Rational>> basis, int unit_power) {
  GroupSpec g;
  g.kind = GroupKind::Translation;
  g.dim = basis.empty() ? 0 : basis.front().dim();
  g.unit_power = unit_power;
  g.lattice = std::move(basis);
  g.validate();
  return g;
}

GroupSpec GroupSpec::integer_translations(size_t dim, const Rational& step, int unit_power) {
  std::vector<Vec<Rational>> basis;
  for (size_t i = 0; i < dim; ++i) {
    Vec<Rational> v(dim);
    v[i] = step;
    basis.push_back(v);
  }
  return translations(std::move(basis), unit_power);
}

GroupSpec GroupSpec::dilations(Mat<Rational> A, Vec<Rational> theta, int unit_power) {
  GroupSpec g;
  g.kind = GroupKind::Dilation;
  g.dim = theta.dim();
  g.unit_power = unit_power;
  g.A = std::move(A);
  g.theta = std::move(theta);
  g.validate();
  return g;
}

GroupSpec GroupSpec::scalar_dilations(size_t dim, const Rational& c, int unit_power) {
  return dilations(c * Mat<Rational>::identity(dim), Vec<Rational>(dim), unit_power);
}

GroupSpec GroupSpec::weyl_box(RBox figure, int unit_power) {
  GroupSpec g;
  g.kind = GroupKind::Weyl;
  g.dim = figure.dim();
  g.unit_power = unit_power;
  g.figure = std::move(figure);
  g.validate();
  return g;
}

GroupSpec GroupSpec::weyl(const FoldableFigure<Scalar>& fig) {
  size_t n = fig.dim();
  if (fig.walls.size() != 2 * n) throw std::invalid_argument("unsupported figure: reflection congruence needs a box");
  for (const auto& w : fig.walls) {
    size_t nz = 0;
    for (const auto& c : w.normal) nz += !c.is_zero();
    if (nz != 1) throw std::invalid_argument("unsupported figure: walls must be axis-parallel");
  }
  Box<Scalar> bb = fig.bounding_box();
  RBox box{Vec<Rational>(n), Vec<Rational>(n)};
  int up = 0;
  for (size_t i = 0; i < n; ++i) {
    for (const Scalar* s : {&bb.lo[i], &bb.hi[i]})
      if (!s->is_zero()) {
        if (up != 0 && s->pi_power() != up) throw std::invalid_argument("figure mixes units");
        up = s->pi_power();
      }
    box.lo[i] = bb.lo[i].coeff();
    box.hi[i] = bb.hi[i].coeff();
  }
  if (up != 0 && up != 1) throw std::invalid_argument("figure coordinates must be rationals or multiples of pi");
  return weyl_box(box, up);
}

void GroupSpec::validate() const {
  if (dim == 0) throw std::invalid_argument("group dimension must be positive");
  if (unit_power != 0 && unit_power != 1) throw std::invalid_argument("unit power must be 0 or 1");
  switch (kind) {
    case GroupKind::Translation: {
      if (lattice.size() != dim) throw std::invalid_argument("lattice needs n basis vectors");
      Mat<Rational> b(dim, dim);
      for (size_t j = 0; j < dim; ++j) {
        if (lattice[j].dim() != dim) throw std::invalid_argument("lattice vector dimension mismatch");
        for (size_t i = 0; i < dim; ++i) b(i, j) = lattice[j][i];
      }
      if (determinant(b) == 0) throw std::invalid_argument("lattice basis is singular");
      break;
    }
    case GroupKind::Dilation: {
      if (A.rows() != dim || A.cols() != dim || theta.dim() != dim)
        throw std::invalid_argument("dilation matrix dimension mismatch");
      if (!is_axis_aligned(AffineMap<Rational>::linear_map(A)))
        throw std::invalid_argument("exact dilation congruence needs an axis-aligned matrix (use grid mode)");
      if (!is_expansive(A, ExpansiveMode::EigenvalueModulus)) throw std::invalid_argument("dilation matrix is not expansive");
      break;
    }
    case GroupKind::Weyl: {
      if (figure.lo.dim() != dim || figure.hi.dim() != dim) throw std::invalid_argument("figure dimension mismatch");
      for (size_t i = 0; i < dim; ++i)
        if (!(figure.lo[i] < figure.hi[i])) throw std::invalid_argument("figure box is empty");
      break;
    }
  }
}

std::string GroupSpec::describe() const {
  std::ostringstream os;
  std::string u = unit_power == 1 ? "pi" : "";
  switch (kind) {
    case GroupKind::Translation:
      os << "translations by";
      for (const auto& v : lattice) os << " " << to_string(v) << u;
      break;
    case GroupKind::Dilation:
      os << "dilations by A about " << to_string(theta) << u;
      break;
    case GroupKind::Weyl:
      os << "reflections in the faces of " << to_string(figure.lo) << u << " .. " << to_string(figure.hi) << u;
      break;
  }
  return os.str();
}

AffineMap<Rational> GroupSpec::dilation_power(long k) const {
  if (kind != GroupKind::Dilation) throw std::logic_error("dilation_power on a non-dilation group");
  Mat<Rational> base = k >= 0 ? A : inverse(A);
  Mat<Rational> p = Mat<Rational>::identity(dim);
  for (long i = 0; i < std::labs(k); ++i) p = base * p;
  return AffineMap<Rational>::dilation_about(p, theta);
}

bool GroupSpec::contains(const AffineMap<Rational>& g) const {
  if (g.dim() != dim) return false;
  switch (kind) {
    case GroupKind::Translation:
      return g.is_translation() && lattice_contains(lattice, g.shift());
    case GroupKind::Dilation: {
      double da = std::abs(to_double(determinant(A))), dg = std::abs(to_double(determinant(g.linear())));
      if (!(dg > 0)) return false;
      long k = std::lround(std::log(dg) / std::log(da));
      return dilation_power(k) == g;
    }
    case GroupKind::Weyl: {
      for (size_t i = 0; i < dim; ++i) {
        for (size_t j = 0; j < dim; ++j)
          if (i != j && g.linear()(i, j) != 0) return false;
        const Rational& e = g.linear()(i, i);
        Rational period = 2 * (figure.hi[i] - figure.lo[i]);
        Rational c = g.shift()[i];
        if (e == 1) {
          if (!is_integer(c / period)) return false;
        } else if (e == -1) {
          if (!is_integer((c - 2 * figure.lo[i]) / period)) return false;
        } else {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

std::vector<AffineMap<Rational>> GroupSpec::candidates(const RBox& src, const RBox& near) const {
  std::vector<AffineMap<Rational>> out;
  switch (kind) {
    case GroupKind::Translation: {
      // v with src + v meeting near lies in the open box (near.lo - src.hi, near.hi - src.lo).
      Mat<double> b(dim, dim);
      for (size_t j = 0; j < dim; ++j)
        for (size_t i = 0; i < dim; ++i) b(i, j) = to_double(lattice[j][i]);
      Mat<double> binv = inverse(b);
      std::vector<double> cmin(dim, 1e300), cmax(dim, -1e300);
      for (size_t mask = 0; mask < (size_t(1) << dim); ++mask) {
        Vec<double> v(dim);
        for (size_t i = 0; i < dim; ++i)
          v[i] = (mask >> i) & 1 ? to_double(near.hi[i] - src.lo[i]) : to_double(near.lo[i] - src.hi[i]);
        Vec<double> c = binv * v;
        for (size_t i = 0; i < dim; ++i) {
          cmin[i] = std::min(cmin[i], c[i]);
          cmax[i] = std::max(cmax[i], c[i]);
        }
      }
      std::vector<std::pair<long, long>> ranges;
      for (size_t i = 0; i < dim; ++i) {
        if (cmax[i] - cmin[i] > 1e6) throw std::runtime_error("translation search range too large");
        ranges.emplace_back(static_cast<long>(std::floor(cmin[i])) - 1, static_cast<long>(std::ceil(cmax[i])) + 1);
      }
      for (const auto& c : ordered_indices(ranges)) {
        Vec<Rational> v(dim);
        for (size_t j = 0; j < dim; ++j) v += Rational(c[j]) * lattice[j];
        auto g = AffineMap<Rational>::translation(v);
        if (meet(map_box(src, g), near)) out.push_back(g);
      }
      break;
    }
    case GroupKind::Dilation: {
      std::vector<std::pair<long, AffineMap<Rational>>> ks;
      Mat<Rational> ainv = inverse(A);
      Mat<Rational> p = Mat<Rational>::identity(dim), q = Mat<Rational>::identity(dim);
      for (long k = 0; k <= kMaxDilationPower; ++k) {
        for (int sgn : {1, -1}) {
          if (k == 0 && sgn == -1) continue;
          auto g = AffineMap<Rational>::dilation_about(sgn > 0 ? p : q, theta);
          if (meet(map_box(src, g), near)) ks.emplace_back(sgn * k, g);
        }
        p = A * p;
        q = ainv * q;
      }
      std::sort(ks.begin(), ks.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto& [k, g] : ks) out.push_back(std::move(g));
      break;
    }
    case GroupKind::Weyl: {
      // Per axis: x -> x + P j and x -> 2 lo + P j - x, P = 2 (hi - lo).
      struct AxisOption {
        long index;  // ordering key
        Rational e, c;
      };
      std::vector<std::vector<AxisOption>> axes(dim);
      std::vector<std::pair<long, long>> ranges;
      for (size_t i = 0; i < dim; ++i) {
        Rational period = 2 * (figure.hi[i] - figure.lo[i]);
        // +: src + P j meets near  <=>  near.lo - src.hi < P j < near.hi - src.lo
        long a = floor_q((near.lo[i] - src.hi[i]) / period) - 1, b = floor_q((near.hi[i] - src.lo[i]) / period) + 1;
        for (long j = a; j <= b; ++j) {
          Rational c = period * j;
          if (src.lo[i] + c < near.hi[i] && near.lo[i] < src.hi[i] + c) axes[i].push_back({2 * std::labs(j), 1, c});
        }
        // -: 2 lo + P j - src meets near  <=>  near.lo < 2lo + Pj - src.lo and 2lo + Pj - src.hi < near.hi
        Rational base = 2 * figure.lo[i];
        a = floor_q((near.lo[i] + src.lo[i] - base) / period) - 1;
        b = floor_q((near.hi[i] + src.hi[i] - base) / period) + 1;
        for (long j = a; j <= b; ++j) {
          Rational c = base + period * j;
          if (c - src.hi[i] < near.hi[i] && near.lo[i] < c - src.lo[i])
            axes[i].push_back({std::labs(2 * j + 1), -1, c});
        }
        ranges.emplace_back(0, static_cast<long>(axes[i].size()) - 1);
      }
      if (std::any_of(ranges.begin(), ranges.end(), [](const auto& r) { return r.second < 0; })) break;
      std::vector<std::pair<std::vector<long>, AffineMap<Rational>>> all;
      for (const auto& idx : ordered_indices(ranges)) {
        Mat<Rational> l(dim, dim);
        Vec<Rational> c(dim);
        std::vector<long> key;
        long norm = 0;
        for (size_t i = 0; i < dim; ++i) {
          const auto& o = axes[i][idx[i]];
          l(i, i) = o.e;
          c[i] = o.c;
          norm += o.index;
          key.push_back(o.index);
        }
        key.insert(key.begin(), norm);
        all.emplace_back(key, AffineMap<Rational>(l, c));
      }
      std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto& [k, g] : all) out.push_back(std::move(g));
      break;
    }
  }
  return out;
}

RBox GroupSpec::cell_box() const {
  switch (kind) {
    case GroupKind::Translation: {
      RBox b{Vec<Rational>(dim), Vec<Rational>(dim)};
      for (const auto& v : lattice)
        for (size_t i = 0; i < dim; ++i) {
          if (v[i] < 0) b.lo[i] += v[i];
          else b.hi[i] += v[i];
        }
      return b;
    }
    case GroupKind::Weyl:
      return figure;
    case GroupKind::Dilation:
      break;
  }
  throw std::logic_error("dilation groups have no bounded fundamental cell");
}

// ---------------------------------------------------------------------------
// Certificates

Scalar CongruenceCertificate::defect() const { return residual.measure() + uncovered.measure(); }

CertificateCheck verify_certificate(const CongruenceCertificate& cert, const DyadicBoxSet& source,
                                    const DyadicBoxSet& target, const GroupSpec& group) {
  CertificateCheck r;
  auto fail = [&](std::string m) {
    r.ok = false;
    r.failures.push_back(std::move(m));
  };
  DyadicBoxSet covered(source.dim(), source.unit_power()), images(target.dim(), target.unit_power());
  for (size_t k = 0; k < cert.pieces.size(); ++k) {
    const auto& p = cert.pieces[k];
    if (!group.contains(p.g)) fail("piece " + std::to_string(k) + ": element not in the group");
    if (!p.piece.subset_of(source)) fail("piece " + std::to_string(k) + " not inside the source");
    if (p.piece.intersects(covered)) fail("piece " + std::to_string(k) + " overlaps an earlier piece");
    DyadicBoxSet img = p.piece.transform(p.g);
    if (!img.subset_of(target)) fail("image " + std::to_string(k) + " not inside the target");
    if (img.intersects(images)) fail("image " + std::to_string(k) + " overlaps an earlier image");
    covered = covered.unite(p.piece);
    images = images.unite(img);
  }
  if (cert.residual.intersects(covered)) fail("residual overlaps the pieces");
  if (!covered.unite(cert.residual).same_set(source)) fail("pieces and residual do not make up the source");
  if (!target.subtract(images).same_set(cert.uncovered)) fail("uncovered set disagrees with the images");
  return r;
}

CongruenceCertificate invert_certificate(const CongruenceCertificate& cert) {
  CongruenceCertificate inv;
  inv.kind = cert.kind;
  for (const auto& p : cert.pieces) inv.pieces.push_back({p.piece.transform(p.g), p.g.inverse()});
  inv.residual = cert.uncovered;
  inv.uncovered = cert.residual;
  return inv;
}

CongruenceCertificate compose_certificates(const CongruenceCertificate& a, const CongruenceCertificate& b) {
  CongruenceCertificate c;
  c.kind = a.kind;
  DyadicBoxSet source = a.residual, target = b.uncovered;
  for (const auto& p : a.pieces) source = source.unite(p.piece);
  for (const auto& q : b.pieces) target = target.unite(q.piece.transform(q.g));
  DyadicBoxSet placed(source.dim(), source.unit_power()), reached(target.dim(), target.unit_power());
  for (const auto& p : a.pieces)
    for (const auto& q : b.pieces) {
      DyadicBoxSet x = p.piece.intersect(q.piece.transform(p.g.inverse()));
      if (x.empty()) continue;
      auto g = compose(q.g, p.g);
      c.pieces.push_back({x.canonical(), g});
      placed = placed.unite(x);
      reached = reached.unite(x.transform(g));
    }
  c.residual = source.subtract(placed).canonical();
  c.uncovered = target.subtract(reached).canonical();
  return c;
}

namespace {

CongruenceCertificate greedy_congruence(const DyadicBoxSet& E, const DyadicBoxSet& target, const GroupSpec& group) {
  if (E.dim() != group.dim || target.dim() != group.dim) throw std::invalid_argument("set and group dimensions differ");
  CongruenceCertificate cert;
  cert.kind = group.kind;
  DyadicBoxSet rem_src = E, rem_tgt = target;
  if (!E.empty() && !target.empty()) {
    for (const auto& g : group.candidates(E.bounding_box(), target.bounding_box())) {
      if (rem_src.empty() || rem_tgt.empty()) break;
      DyadicBoxSet piece = rem_src.intersect(rem_tgt.transform(g.inverse()));
      if (piece.empty()) continue;
      piece = piece.canonical();
      rem_src = rem_src.subtract(piece);
      rem_tgt = rem_tgt.subtract(piece.transform(g));
      cert.pieces.push_back({piece, g});
    }
  }
  cert.residual = rem_src.canonical();
  cert.uncovered = rem_tgt.canonical();
  return cert;
}

void require_kind(const GroupSpec& g, GroupKind k) {
  if (g.kind != k) throw std::invalid_argument("expected a " + to_string(k) + " group, got " + to_string(g.kind));
}

void require_away_from_center(const DyadicBoxSet& s, const GroupSpec& g, const char* what) {
  if (closure_contains(s, g.theta))
    throw std::domain_error(std::string(what) + " must be bounded away from the dilation center");
}

}  // namespace

CongruenceCertificate congruence(const DyadicBoxSet& E, const DyadicBoxSet& target, const GroupSpec& group) {
  if (group.kind == GroupKind::Dilation) {
    require_away_from_center(E, group, "source");
    require_away_from_center(target, group, "target");
  }
  return greedy_congruence(E, target, group);
}

CongruenceCertificate translation_congruent(const DyadicBoxSet& E, const DyadicBoxSet& target,
                                            const GroupSpec& lattice) {
  require_kind(lattice, GroupKind::Translation);
  return congruence(E, target, lattice);
}

CongruenceCertificate dilation_congruent(const DyadicBoxSet& E, const DyadicBoxSet& target,
                                         const GroupSpec& dilations) {
  require_kind(dilations, GroupKind::Dilation);
  return congruence(E, target, dilations);
}

CongruenceCertificate weyl_congruent(const DyadicBoxSet& E, const GroupSpec& weyl,
                                     const std::optional<DyadicBoxSet>& target) {
  require_kind(weyl, GroupKind::Weyl);
  DyadicBoxSet t = target ? *target : DyadicBoxSet::box(weyl.figure.lo, weyl.figure.hi, weyl.unit_power);
  return congruence(E, t, weyl);
}

DyadicBoxSet dilation_reduce(const DyadicBoxSet& source, const DyadicBoxSet& target, const GroupSpec& dilations) {
  require_kind(dilations, GroupKind::Dilation);
  require_away_from_center(source, dilations, "source");
  require_away_from_center(target, dilations, "target");
  DyadicBoxSet out(source.dim(), source.unit_power());
  if (source.empty() || target.empty()) return out;
  for (const auto& g : dilations.candidates(source.bounding_box(), target.bounding_box())) {
    DyadicBoxSet piece = source.intersect(target.transform(g.inverse()));
    if (!piece.empty()) out = out.unite(piece.transform(g));
  }
  return out.canonical();
}

// ---------------------------------------------------------------------------
// Fundamental domains

FundamentalDomainReport is_fundamental_domain(const DyadicBoxSet& E, const GroupSpec& group,
                                              const DyadicBoxSet& region) {
  if (region.empty()) throw std::invalid_argument("region is empty");
  RBox rb = region.bounding_box();
  if (group.kind == GroupKind::Dilation) {
    require_away_from_center(E, group, "set");
    require_away_from_center(region, group, "region");
  } else {
    RBox cell = group.cell_box();
    for (size_t i = 0; i < group.dim; ++i)
      if (rb.hi[i] - rb.lo[i] < 3 * (cell.hi[i] - cell.lo[i]))
        throw std::invalid_argument("region too small: it must span at least three group cells per axis");
  }
  FundamentalDomainReport rep;
  DyadicBoxSet uni(region.dim(), region.unit_power());
  Scalar total(0);
  if (!E.empty()) {
    for (const auto& g : group.candidates(E.bounding_box(), rb)) {
      DyadicBoxSet img = E.transform(g).intersect(region);
      if (img.empty()) continue;
      ++rep.images;
      total += img.measure();
      uni = uni.unite(img);
    }
  }
  rep.overlap = total - uni.measure();
  rep.uncovered = region.subtract(uni).measure();
  rep.ok = rep.overlap.is_zero() && rep.uncovered.is_zero();
  return rep;
}

GridPartitionReport dilation_partition_grid(const std::function<bool(const Vec<double>&)>& in_F,
                                            const Mat<double>& A, const Vec<double>& theta,
                                            const std::function<bool(const Vec<double>&)>& in_region,
                                            const Vec<double>& region_lo, const Vec<double>& region_hi,
                                            double resolution, int max_power) {
  size_t n = theta.dim();
  if (A.rows() != n || region_lo.dim() != n || region_hi.dim() != n) throw std::invalid_argument("dimension mismatch");
  if (!(resolution > 0)) throw std::invalid_argument("resolution must be positive");
  if (!is_expansive(A, ExpansiveMode::EigenvalueModulus)) throw std::invalid_argument("dilation matrix is not expansive");
  Mat<double> ainv = inverse(A);
  std::vector<size_t> counts(n);
  size_t total = 1;
  for (size_t i = 0; i < n; ++i) {
    counts[i] = static_cast<size_t>(std::ceil((region_hi[i] - region_lo[i]) / resolution));
    total *= counts[i];
  }
  if (total > 50000000) throw std::invalid_argument("grid too fine");
  GridPartitionReport rep;
  size_t region_points = 0;
  Vec<double> y(n);
  for (size_t idx = 0; idx < total; ++idx) {
    size_t r = idx;
    for (size_t i = 0; i < n; ++i) {
      y[i] = region_lo[i] + (static_cast<double>(r % counts[i]) + 0.5) * resolution;
      r /= counts[i];
    }
    if (!in_region(y)) continue;
    ++region_points;
    int hits = 0;
    Vec<double> up = y - theta, down = y - theta;  // A^k (y - theta) and A^{-k} (y - theta)
    if (in_F(y)) ++hits;
    for (int k = 1; k <= max_power && hits < 2; ++k) {
      up = A * up;
      down = ainv * down;
      if (in_F(up + theta)) ++hits;
      if (in_F(down + theta)) ++hits;
    }
    if (hits == 0) ++rep.uncovered;
    if (hits > 1) ++rep.multiply_covered;
  }
  rep.points = region_points;
  double cell = std::pow(resolution, static_cast<double>(n));
  rep.defect = static_cast<double>(rep.uncovered + rep.multiply_covered) * cell;
  return rep;
}

// ---------------------------------------------------------------------------
// Reflections and translations

bool IntersectionGroup::contains(const Vec<Scalar>& v) const {
  if (v.dim() != generators.size()) return false;
  for (size_t i = 0; i < v.dim(); ++i) {
    if (v[i].is_zero()) continue;
    Scalar q = v[i] / generators[i][i];
    if (q.pi_power() != 0 || !is_integer(q.coeff())) return false;
  }
  return true;
}

IntersectionGroup intersection_group(const FoldableFigure<Scalar>& figure, const std::vector<Vec<Scalar>>& lattice) {
  size_t n = figure.dim();
  GroupSpec::weyl(figure);  // rejects figures other than boxes
  if (lattice.size() != n) throw std::invalid_argument("lattice needs n generators");
  auto axis_of = [&](const Vec<Scalar>& v) -> size_t {
    size_t axis = n, nz = 0;
    for (size_t i = 0; i < n; ++i)
      if (!v[i].is_zero()) {
        axis = i;
        ++nz;
      }
    if (nz != 1) throw std::invalid_argument("unsupported lattice: generators must be axis-parallel");
    return axis;
  };
  auto st = semidirect_structure(figure, 0);
  IntersectionGroup j;
  j.weyl_translations = st.coroot_translations;
  j.lattice = lattice;
  std::vector<std::optional<Scalar>> gam(n), lat(n);
  for (const auto& v : st.coroot_translations) {
    size_t a = axis_of(v);
    gam[a] = abs(v[a]);
  }
  for (const auto& v : lattice) {
    size_t a = axis_of(v);
    if (lat[a]) throw std::invalid_argument("lattice generators must span distinct axes");
    lat[a] = abs(v[a]);
  }
  for (size_t i = 0; i < n; ++i) {
    if (!gam[i] || !lat[i]) throw std::invalid_argument("translation generators do not span every axis");
    if (gam[i]->pi_power() != lat[i]->pi_power()) throw std::invalid_argument("incommensurable translation units");
    Vec<Scalar> g(n);
    for (size_t k = 0; k < n; ++k) g[k] = Scalar(0);
    g[i] = Scalar(lcm_q(gam[i]->coeff(), lat[i]->coeff()), gam[i]->pi_power());
    j.generators.push_back(g);
  }
  return j;
}

ReflectionComposition compose_reflections(const Vec<Scalar>& r, long k, const Vec<Scalar>& s, long l) {
  auto a = affine_reflection(r, Scalar::pi(Rational(k)));
  auto b = affine_reflection(s, Scalar::pi(Rational(l)));
  ReflectionComposition c;
  c.map = compose(a, b);
  c.is_translation = c.map.is_translation();
  if (c.is_translation) c.translation = c.map.shift();
  Mat<Scalar> m = Mat<Scalar>::identity(r.dim()) - c.map.linear();
  if (!c.is_translation && determinant(m) != Scalar(0)) c.fixed = solve(m, c.map.shift());
  return c;
}

// ---------------------------------------------------------------------------

ThreeWayReport three_way_check(const DyadicBoxSet& W, const GroupSpec& lattice, const GroupSpec& weyl,
                               const GroupSpec& dilations, const Scalar& bound) {
  require_kind(lattice, GroupKind::Translation);
  require_kind(weyl, GroupKind::Weyl);
  require_kind(dilations, GroupKind::Dilation);
  ThreeWayReport rep;
  rep.bound = bound;
  DyadicBoxSet C = DyadicBoxSet::box(weyl.figure.lo, weyl.figure.hi, weyl.unit_power);
  DyadicBoxSet AC = C.transform(dilations.dilation_power(1));
  DyadicBoxSet F = AC.subtract(C).canonical();
  rep.translation = translation_congruent(W, C, lattice);
  rep.weyl = weyl_congruent(W, weyl);
  rep.dilation = dilation_congruent(W, F, dilations);
  rep.translation_ok = rep.translation.defect() <= bound;
  rep.weyl_ok = rep.weyl.defect() <= bound;
  rep.dilation_ok = rep.dilation.defect() <= bound;
  return rep;
}

}  // namespace cwave

#include "cwave/boxset.hpp"

#include "json.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cwave {

namespace {

bool boxes_meet(const RBox& a, const RBox& b) {
  for (size_t i = 0; i < a.dim(); ++i)
    if (!(a.lo[i] < b.hi[i] && b.lo[i] < a.hi[i])) return false;
  return true;
}

RBox box_intersection(const RBox& a, const RBox& b) {
  RBox r = a;
  for (size_t i = 0; i < a.dim(); ++i) {
    r.lo[i] = std::max(a.lo[i], b.lo[i]);
    r.hi[i] = std::min(a.hi[i], b.hi[i]);
  }
  return r;
}

// a \ b as at most 2n disjoint boxes.
void box_difference(const RBox& a, const RBox& b, std::vector<RBox>& out) {
  if (!boxes_meet(a, b)) {
    out.push_back(a);
    return;
  }
  RBox cur = a;
  for (size_t i = 0; i < a.dim(); ++i) {
    if (cur.lo[i] < b.lo[i]) {
      RBox piece = cur;
      piece.hi[i] = b.lo[i];
      out.push_back(piece);
      cur.lo[i] = b.lo[i];
    }
    if (b.hi[i] < cur.hi[i]) {
      RBox piece = cur;
      piece.lo[i] = b.hi[i];
      out.push_back(piece);
      cur.hi[i] = b.hi[i];
    }
  }
}

// Canonical slab decomposition along `axis` and the following axes.
std::vector<RBox> canonical_boxes(const std::vector<RBox>& boxes, size_t axis) {
  if (boxes.empty()) return {};
  size_t n = boxes.front().dim();
  std::vector<Rational> cuts;
  for (const auto& b : boxes) {
    cuts.push_back(b.lo[axis]);
    cuts.push_back(b.hi[axis]);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<RBox> out;
  std::vector<RBox> open_section;  // cross-section of the slab being extended
  Rational open_lo;
  bool open = false;
  auto flush = [&](const Rational& hi) {
    if (!open) return;
    for (auto b : open_section) {
      b.lo[axis] = open_lo;
      b.hi[axis] = hi;
      out.push_back(std::move(b));
    }
    open = false;
  };
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Rational& lo = cuts[k];
    const Rational& hi = cuts[k + 1];
    std::vector<RBox> members;
    for (const auto& b : boxes)
      if (b.lo[axis] <= lo && hi <= b.hi[axis]) members.push_back(b);
    std::vector<RBox> section;
    if (!members.empty()) {
      if (axis + 1 < n) {
        section = canonical_boxes(members, axis + 1);
      } else {
        section.push_back(members.front());
      }
      for (auto& b : section) {  // neutral values on this axis for comparison
        b.lo[axis] = 0;
        b.hi[axis] = 0;
      }
    }
    if (open && section == open_section) continue;  // extend the slab
    flush(lo);
    if (!section.empty()) {
      open = true;
      open_lo = lo;
      open_section = std::move(section);
    }
  }
  flush(cuts.back());
  return out;
}

nlohmann::json rational_json(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  auto part = [](const BigInt& z) -> nlohmann::json {
    if (z >= std::numeric_limits<long long>::min() && z <= std::numeric_limits<long long>::max())
      return z.convert_to<long long>();
    return z.str();
  };
  return nlohmann::json::array({part(num), part(den)});
}

Rational rational_from_json(const nlohmann::json& j) {
  auto part = [](const nlohmann::json& x) -> BigInt {
    if (x.is_number_integer()) return BigInt(x.get<long long>());
    if (x.is_string()) return BigInt(x.get<std::string>());
    throw std::invalid_argument("box set json: rational parts must be integers");
  };
  if (j.is_array() && j.size() == 2) {
    BigInt den = part(j[1]);
    if (den == 0) throw std::invalid_argument("box set json: zero denominator");
    return Rational(part(j[0]), den);
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw std::invalid_argument("box set json: bad coordinate");
}

}  // namespace

Rational RBox::volume() const {
  Rational v = 1;
  for (size_t i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool RBox::contains(const Vec<Rational>& x) const {
  for (size_t i = 0; i < dim(); ++i)
    if (x[i] < lo[i] || !(x[i] < hi[i])) return false;
  return true;
}

DyadicBoxSet DyadicBoxSet::box(const Vec<Rational>& lo, const Vec<Rational>& hi, int unit_power) {
  if (lo.dim() != hi.dim() || lo.dim() == 0) throw std::invalid_argument("box corners must share a positive dimension");
  DyadicBoxSet s(lo.dim(), unit_power);
  for (size_t i = 0; i < lo.dim(); ++i)
    if (!(lo[i] < hi[i])) return s;  // empty box
  s.boxes_.push_back(RBox{lo, hi});
  return s;
}

DyadicBoxSet DyadicBoxSet::interval(const Rational& lo, const Rational& hi, int unit_power) {
  return box(Vec<Rational>{lo}, Vec<Rational>{hi}, unit_power);
}

DyadicBoxSet DyadicBoxSet::from_boxes(size_t dim, const std::vector<RBox>& boxes, int unit_power) {
  DyadicBoxSet s(dim, unit_power);
  for (const auto& b : boxes) {
    if (b.dim() != dim || b.hi.dim() != dim) throw std::invalid_argument("box dimension mismatch");
    s = s.unite(box(b.lo, b.hi, unit_power));
  }
  return s;
}

DyadicBoxSet DyadicBoxSet::from_disjoint(size_t dim, std::vector<RBox> boxes, int unit_power) {
  DyadicBoxSet s(dim, unit_power);
  s.boxes_ = std::move(boxes);
  return s;
}

void DyadicBoxSet::check(const DyadicBoxSet& o) const {
  if (o.dim_ != dim_) throw std::invalid_argument("box set dimension mismatch");
  if (o.unit_ != unit_ && !o.empty() && !empty()) throw std::invalid_argument("box set unit mismatch");
}

void DyadicBoxSet::add_disjoint(const RBox& b) { boxes_.push_back(b); }

Rational DyadicBoxSet::measure_coeff() const {
  Rational m = 0;
  for (const auto& b : boxes_) m += b.volume();
  return m;
}

Scalar DyadicBoxSet::measure() const { return Scalar(measure_coeff(), static_cast<int>(dim_) * unit_); }

bool DyadicBoxSet::contains(const Vec<Rational>& x) const {
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const RBox& b) { return b.contains(x); });
}

RBox DyadicBoxSet::bounding_box() const {
  if (boxes_.empty()) throw std::domain_error("bounding box of the empty set");
  RBox r = boxes_.front();
  for (const auto& b : boxes_)
    for (size_t i = 0; i < dim_; ++i) {
      r.lo[i] = std::min(r.lo[i], b.lo[i]);
      r.hi[i] = std::max(r.hi[i], b.hi[i]);
    }
  return r;
}

DyadicBoxSet DyadicBoxSet::subtract(const DyadicBoxSet& o) const {
  check(o);
  if (empty() || o.empty()) return *this;
  RBox ob = o.bounding_box();
  DyadicBoxSet r(dim_, unit_);
  for (const auto& a : boxes_) {
    if (!boxes_meet(a, ob)) {
      r.add_disjoint(a);
      continue;
    }
    std::vector<RBox> cur{a};
    for (const auto& b : o.boxes_) {
      std::vector<RBox> next;
      for (const auto& c : cur) box_difference(c, b, next);
      cur = std::move(next);
      if (cur.empty()) break;
    }
    for (auto& c : cur) r.add_disjoint(c);
  }
  return r;
}

DyadicBoxSet DyadicBoxSet::unite(const DyadicBoxSet& o) const {
  check(o);
  if (empty()) {
    DyadicBoxSet r = o;
    r.unit_ = o.empty() ? unit_ : o.unit_;
    return r;
  }
  DyadicBoxSet r = *this;
  for (const auto& b : o.subtract(*this).boxes_) r.add_disjoint(b);
  return r;
}

DyadicBoxSet DyadicBoxSet::intersect(const DyadicBoxSet& o) const {
  check(o);
  DyadicBoxSet r(dim_, unit_);
  for (const auto& a : boxes_)
    for (const auto& b : o.boxes_)
      if (boxes_meet(a, b)) r.add_disjoint(box_intersection(a, b));
  return r;
}

bool DyadicBoxSet::intersects(const DyadicBoxSet& o) const {
  check(o);
  for (const auto& a : boxes_)
    for (const auto& b : o.boxes_)
      if (boxes_meet(a, b)) return true;
  return false;
}

bool DyadicBoxSet::subset_of(const DyadicBoxSet& o) const { return subtract(o).empty(); }

bool DyadicBoxSet::same_set(const DyadicBoxSet& o) const { return subset_of(o) && o.subset_of(*this); }

bool is_axis_aligned(const AffineMap<Rational>& g) {
  size_t n = g.dim();
  const auto& l = g.linear();
  for (size_t i = 0; i < n; ++i) {
    size_t row = 0, col = 0;
    for (size_t j = 0; j < n; ++j) {
      row += l(i, j) != 0;
      col += l(j, i) != 0;
    }
    if (row != 1 || col != 1) return false;
  }
  return true;
}

DyadicBoxSet DyadicBoxSet::transform(const AffineMap<Rational>& g) const {
  if (g.dim() != dim_) throw std::invalid_argument("transform dimension mismatch");
  if (!is_axis_aligned(g)) throw std::domain_error("transform would produce non-axis-aligned boxes");
  const auto& l = g.linear();
  const auto& t = g.shift();
  DyadicBoxSet r(dim_, unit_);
  for (const auto& b : boxes_) {
    RBox img{Vec<Rational>(dim_), Vec<Rational>(dim_)};
    for (size_t i = 0; i < dim_; ++i) {
      size_t j = 0;
      while (l(i, j) == 0) ++j;
      const Rational& a = l(i, j);
      Rational u = a * b.lo[j] + t[i], v = a * b.hi[j] + t[i];
      if (a > 0) {
        img.lo[i] = u;
        img.hi[i] = v;
      } else {
        img.lo[i] = v;
        img.hi[i] = u;
      }
    }
    r.add_disjoint(img);
  }
  return r;
}

DyadicBoxSet DyadicBoxSet::translate(const Vec<Rational>& t) const {
  return transform(AffineMap<Rational>::translation(t));
}

DyadicBoxSet DyadicBoxSet::scale(const Rational& c) const {
  if (c == 0) throw std::invalid_argument("scale factor must be nonzero");
  return transform(AffineMap<Rational>::linear_map(c * Mat<Rational>::identity(dim_)));
}

DyadicBoxSet DyadicBoxSet::mirror(size_t axis) const {
  if (axis >= dim_) throw std::invalid_argument("mirror axis out of range");
  Mat<Rational> l = Mat<Rational>::identity(dim_);
  l(axis, axis) = -1;
  return transform(AffineMap<Rational>::linear_map(l));
}

DyadicBoxSet DyadicBoxSet::canonical() const {
  DyadicBoxSet r(dim_, unit_);
  r.boxes_ = canonical_boxes(boxes_, 0);
  std::sort(r.boxes_.begin(), r.boxes_.end());
  return r;
}

std::string DyadicBoxSet::to_json() const {
  nlohmann::json j;
  j["dim"] = dim_;
  j["unit"] = unit_ == 1 ? "pi" : "1";
  j["boxes"] = nlohmann::json::array();
  for (const auto& b : canonical().boxes_) {
    nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
    for (size_t i = 0; i < dim_; ++i) {
      lo.push_back(rational_json(b.lo[i]));
      hi.push_back(rational_json(b.hi[i]));
    }
    j["boxes"].push_back({{"lo", lo}, {"hi", hi}});
  }
  return j.dump();
}

DyadicBoxSet DyadicBoxSet::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("box set json: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("boxes")) throw std::invalid_argument("box set json: missing dim or boxes");
  size_t dim = j["dim"].get<size_t>();
  std::string unit = j.value("unit", std::string("pi"));
  if (unit != "pi" && unit != "1") throw std::invalid_argument("box set json: unit must be \"pi\" or \"1\"");
  int up = unit == "pi" ? 1 : 0;
  std::vector<RBox> boxes;
  for (const auto& b : j["boxes"]) {
    RBox r{Vec<Rational>(dim), Vec<Rational>(dim)};
    if (b.at("lo").size() != dim || b.at("hi").size() != dim)
      throw std::invalid_argument("box set json: corner dimension mismatch");
    for (size_t i = 0; i < dim; ++i) {
      r.lo[i] = rational_from_json(b["lo"][i]);
      r.hi[i] = rational_from_json(b["hi"][i]);
    }
    boxes.push_back(r);
  }
  return from_boxes(dim, boxes, up);
}

DiskApproximation disk_approximation(const Rational& radius, int depth, int unit_power) {
  if (radius <= 0) throw std::invalid_argument("radius must be positive");
  if (depth < 1 || depth > 12) throw std::invalid_argument("depth must lie in [1, 12]");
  long cells = 1L << depth;
  Rational h = 2 * radius / cells, r2 = radius * radius;
  std::vector<RBox> inner, outer;
  for (long i = 0; i < cells; ++i)
    for (long j = 0; j < cells; ++j) {
      Vec<Rational> lo{-radius + h * i, -radius + h * j};
      Vec<Rational> hi{lo[0] + h, lo[1] + h};
      Rational far = 0, near = 0;
      for (size_t k = 0; k < 2; ++k) {
        Rational a = abs_q(lo[k]), b = abs_q(hi[k]);
        Rational m = std::max(a, b);
        far += m * m;
        if (!(lo[k] < 0 && hi[k] > 0)) {
          Rational n = std::min(a, b);
          near += n * n;
        }
      }
      if (far <= r2) inner.push_back(RBox{lo, hi});
      if (near < r2) outer.push_back(RBox{lo, hi});
    }
  return {DyadicBoxSet::from_disjoint(2, std::move(inner), unit_power).canonical(),
          DyadicBoxSet::from_disjoint(2, std::move(outer), unit_power).canonical()};
}

}  // namespace cwave

// Polynomials in one and several variables with exact or float coefficients.
#pragma once

#include "cwave/linalg.hpp"

#include <map>
#include <vector>

namespace cwave {

// Univariate polynomial, coefficients low-to-high.
template <class T>
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<T> c) : c_(std::move(c)) { trim(); }
  static Poly1 constant(const T& a) { return Poly1({a}); }
  static Poly1 affine(const T& slope, const T& intercept) { return Poly1({intercept, slope}); }

  const std::vector<T>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial
  T coeff(size_t k) const { return k < c_.size() ? c_[k] : T(0); }

  T operator()(const T& x) const {
    T r(0);
    for (size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
    return r;
  }

  friend Poly1 operator+(const Poly1& a, const Poly1& b) {
    std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
    for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return Poly1(std::move(c));
  }
  friend Poly1 operator-(const Poly1& a, const Poly1& b) { return a + (-b); }
  Poly1 operator-() const {
    Poly1 r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Poly1 operator*(const T& s, Poly1 p) {
    for (auto& x : p.c_) x *= s;
    p.trim();
    return p;
  }
  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly1();
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly1(std::move(c));
  }
  friend bool operator==(const Poly1& a, const Poly1& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly1& a, const Poly1& b) { return !(a == b); }

  // p(alpha t + beta) as a polynomial in t.
  Poly1 compose_affine(const T& alpha, const T& beta) const {
    Poly1 r;
    Poly1 lin({beta, alpha});
    for (size_t k = c_.size(); k-- > 0;) r = r * lin + Poly1::constant(c_[k]);
    return r;
  }
  // Integral over [lo, hi].
  T integral(const T& lo, const T& hi) const {
    T r(0);
    for (size_t k = 0; k < c_.size(); ++k) {
      T kk(static_cast<long>(k + 1));
      r += c_[k] * (power(hi, k + 1) - power(lo, k + 1)) / kk;
    }
    return r;
  }
  static T power(const T& x, size_t k) {
    T r(1);
    for (size_t i = 0; i < k; ++i) r *= x;
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && exact_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

// Multivariate polynomial, sparse map from exponent vectors to coefficients.
template <class T>
class Poly {
 public:
  using Exponent = std::vector<int>;
  Poly() = default;
  explicit Poly(size_t nvars) : n_(nvars) {}
  static Poly constant(size_t nvars, const T& a) {
    Poly p(nvars);
    p.add_term(Exponent(nvars, 0), a);
    return p;
  }
  // x_k as a polynomial.
  static Poly variable(size_t nvars, size_t k) {
    Poly p(nvars);
    Exponent e(nvars, 0);
    e[k] = 1;
    p.add_term(e, T(1));
    return p;
  }
  // c0 + sum_k g[k] x_k
  static Poly affine(const T& c0, const Vec<T>& g) {
    Poly p = constant(g.dim(), c0);
    for (size_t k = 0; k < g.dim(); ++k) p = p + g[k] * variable(g.dim(), k);
    return p;
  }

  size_t nvars() const { return n_; }
  const std::map<Exponent, T>& terms() const { return t_; }
  void add_term(const Exponent& e, const T& c) {
    if (e.size() != n_) throw std::invalid_argument("exponent arity mismatch");
    auto it = t_.find(e);
    if (it == t_.end()) {
      if (!exact_zero(c)) t_.emplace(e, c);
    } else {
      it->second += c;
      if (exact_zero(it->second)) t_.erase(it);
    }
  }
  T coeff(const Exponent& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? T(0) : it->second;
  }
  int degree() const {
    int d = -1;
    for (auto& [e, c] : t_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }
  bool is_zero() const { return t_.empty(); }

  T operator()(const Vec<T>& x) const {
    if (x.dim() != n_) throw std::invalid_argument("polynomial arity mismatch");
    T r(0);
    for (auto& [e, c] : t_) {
      T m = c;
      for (size_t k = 0; k < n_; ++k)
        for (int j = 0; j < e[k]; ++j) m *= x[k];
      r += m;
    }
    return r;
  }

  friend Poly operator+(Poly a, const Poly& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("polynomial arity mismatch");
    for (auto& [e, c] : b.t_) a.add_term(e, c);
    return a;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (T(-1) * b); }
  friend Poly operator*(const T& s, const Poly& p) {
    Poly r(p.n_);
    for (auto& [e, c] : p.t_) r.add_term(e, s * c);
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("polynomial arity mismatch");
    Poly r(a.n_);
    for (auto& [ea, ca] : a.t_)
      for (auto& [eb, cb] : b.t_) {
        Exponent e(a.n_);
        for (size_t k = 0; k < a.n_; ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.n_ == b.n_ && a.t_ == b.t_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // p(g(x)) for an affine map g.
  Poly compose(const AffineMap<T>& g) const {
    if (g.dim() != n_) throw std::invalid_argument("polynomial arity mismatch");
    std::vector<Poly> comp;
    for (size_t k = 0; k < n_; ++k) {
      Vec<T> row(n_);
      for (size_t j = 0; j < n_; ++j) row[j] = g.linear()(k, j);
      comp.push_back(affine(g.shift()[k], row));
    }
    Poly r(n_);
    for (auto& [e, c] : t_) {
      Poly m = constant(n_, c);
      for (size_t k = 0; k < n_; ++k)
        for (int j = 0; j < e[k]; ++j) m = m * comp[k];
      r = r + m;
    }
    return r;
  }

  // Restriction to the segment t -> p + t (q - p), t in [0,1].
  Poly1<T> restrict_segment(const Vec<T>& p, const Vec<T>& q) const {
    std::vector<Poly1<T>> comp;
    for (size_t k = 0; k < n_; ++k) comp.push_back(Poly1<T>::affine(q[k] - p[k], p[k]));
    Poly1<T> r;
    for (auto& [e, c] : t_) {
      Poly1<T> m = Poly1<T>::constant(c);
      for (size_t k = 0; k < n_; ++k)
        for (int j = 0; j < e[k]; ++j) m = m * comp[k];
      r = r + m;
    }
    return r;
  }

 private:
  size_t n_ = 0;
  std::map<Exponent, T> t_;
};

template <class To, class From>
Poly<To> convert(const Poly<From>& p) {
  Poly<To> r(p.nvars());
  for (auto& [e, c] : p.terms()) {
    if constexpr (std::is_same_v<To, double>) r.add_term(e, to_double(c));
    else r.add_term(e, To(c));
  }
  return r;
}

}  // namespace cwave

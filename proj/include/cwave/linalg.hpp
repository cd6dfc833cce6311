// Small dense vectors, matrices and affine maps over an arbitrary scalar
// field T (cwave::Scalar, cwave::Rational or double).  Dimensions are tiny
// (n <= 4 in exact mode), so storage is a plain std::vector and every
// algorithm is the textbook one.
#pragma once

#include "cwave/scalar.hpp"

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwave {

template <class T>
class Vec {
 public:
  Vec() = default;
  explicit Vec(size_t n) : v_(n, T(0)) {}
  Vec(std::initializer_list<T> xs) : v_(xs) {}
  explicit Vec(std::vector<T> xs) : v_(std::move(xs)) {}

  size_t dim() const { return v_.size(); }
  T& operator[](size_t i) { return v_[i]; }
  const T& operator[](size_t i) const { return v_[i]; }
  const std::vector<T>& data() const { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  Vec& operator+=(const Vec& o) {
    check(o);
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    check(o);
    for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(const T& a) {
    for (auto& x : v_) x *= a;
    return *this;
  }
  Vec& operator/=(const T& a) {
    for (auto& x : v_) x /= a;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(const T& s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, const T& s) { return a *= s; }
  friend Vec operator/(Vec a, const T& s) { return a /= s; }
  Vec operator-() const {
    Vec r(*this);
    for (auto& x : r.v_) x = -x;
    return r;
  }
  friend bool operator==(const Vec& a, const Vec& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }
  friend bool operator<(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.v_.begin(), a.v_.end(), b.v_.begin(), b.v_.end());
  }

 private:
  void check(const Vec& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("vector dimension mismatch");
  }
  std::vector<T> v_;
};

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("vector dimension mismatch");
  T s(0);
  for (size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
std::string to_string(const Vec<T>& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.dim(); ++i) {
    if (i) os << ", ";
    if constexpr (std::is_same_v<T, double>) os << v[i];
    else os << to_string(v[i]);
  }
  os << ")";
  return os.str();
}

template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(size_t r, size_t c) : r_(r), c_(c), a_(r * c, T(0)) {}
  explicit Mat(size_t n) : Mat(n, n) {}
  Mat(std::initializer_list<std::initializer_list<T>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (auto& row : rows) {
      if (row.size() != c_) throw std::invalid_argument("ragged matrix literal");
      for (auto& x : row) a_.push_back(x);
    }
  }
  static Mat identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Mat diag(const Vec<T>& d) {
    Mat m(d.dim(), d.dim());
    for (size_t i = 0; i < d.dim(); ++i) m(i, i) = d[i];
    return m;
  }

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  T& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const T& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

  Mat transpose() const {
    Mat t(c_, r_);
    for (size_t i = 0; i < r_; ++i)
      for (size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix dimension mismatch");
    Mat m(a.r_, b.c_);
    for (size_t i = 0; i < a.r_; ++i)
      for (size_t k = 0; k < a.c_; ++k) {
        if (exact_zero(a(i, k))) continue;
        for (size_t j = 0; j < b.c_; ++j) m(i, j) += a(i, k) * b(k, j);
      }
    return m;
  }
  friend Vec<T> operator*(const Mat& a, const Vec<T>& x) {
    if (a.c_ != x.dim()) throw std::invalid_argument("matrix/vector dimension mismatch");
    Vec<T> y(a.r_);
    for (size_t i = 0; i < a.r_; ++i)
      for (size_t j = 0; j < a.c_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }
  friend Mat operator*(const T& s, Mat a) {
    for (auto& x : a.a_) x *= s;
    return a;
  }
  friend Mat operator+(Mat a, const Mat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw std::invalid_argument("matrix dimension mismatch");
    for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
  }
  friend Mat operator-(Mat a, const Mat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw std::invalid_argument("matrix dimension mismatch");
    for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
    return a;
  }
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }
  friend bool operator<(const Mat& a, const Mat& b) {
    if (a.r_ != b.r_) return a.r_ < b.r_;
    if (a.c_ != b.c_) return a.c_ < b.c_;
    return std::lexicographical_compare(a.a_.begin(), a.a_.end(), b.a_.begin(), b.a_.end());
  }
  const std::vector<T>& data() const { return a_; }

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<T> a_;
};

namespace detail {
template <class T>
bool pivot_nonzero(const T& x) {
  if constexpr (std::is_same_v<T, double>) return std::abs(x) > 1e-300;
  else return !exact_zero(x);
}
}  // namespace detail

// Determinant by Gaussian elimination (partial pivoting in float mode).
template <class T>
T determinant(Mat<T> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  size_t n = m.rows();
  T det(1);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    if constexpr (std::is_same_v<T, double>) {
      for (size_t r = c + 1; r < n; ++r)
        if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
    } else {
      while (p < n && exact_zero(m(p, c))) ++p;
      if (p == n) return T(0);
    }
    if (!detail::pivot_nonzero(m(p, c))) return T(0);
    if (p != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (size_t r = c + 1; r < n; ++r) {
      if (exact_zero(m(r, c))) continue;
      T f = m(r, c) / m(c, c);
      for (size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

// Inverse by Gauss-Jordan; throws std::domain_error("not invertible").
template <class T>
Mat<T> inverse(Mat<T> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  size_t n = m.rows();
  Mat<T> inv = Mat<T>::identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    if constexpr (std::is_same_v<T, double>) {
      for (size_t r = c + 1; r < n; ++r)
        if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
    } else {
      while (p < n && exact_zero(m(p, c))) ++p;
      if (p == n) throw std::domain_error("not invertible");
    }
    if (!detail::pivot_nonzero(m(p, c))) throw std::domain_error("not invertible");
    for (size_t j = 0; j < n; ++j) {
      std::swap(m(p, j), m(c, j));
      std::swap(inv(p, j), inv(c, j));
    }
    T piv = m(c, c);
    for (size_t j = 0; j < n; ++j) {
      m(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || exact_zero(m(r, c))) continue;
      T f = m(r, c);
      for (size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

// Solve A x = b exactly / by Gaussian elimination.
template <class T>
Vec<T> solve(const Mat<T>& a, const Vec<T>& b) {
  return inverse(a) * b;
}

// Null space basis (exact arithmetic): returns vectors spanning {x : A x = 0}.
template <class T>
std::vector<Vec<T>> null_space(Mat<T> m) {
  size_t rows = m.rows(), cols = m.cols();
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && exact_zero(m(p, c))) ++p;
    if (p == rows) continue;
    for (size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
    T piv = m(r, c);
    for (size_t j = 0; j < cols; ++j) m(r, j) /= piv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || exact_zero(m(i, c))) continue;
      T f = m(i, c);
      for (size_t j = 0; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<Vec<T>> basis;
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec<T> v(cols);
    v[f] = T(1);
    for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m(k, f);
    basis.push_back(v);
  }
  return basis;
}

// x -> linear * x + shift.  Used for isometries (Weyl group elements,
// reflections, translations) as well as similitudes and affine dilations.
template <class T>
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(Mat<T> linear, Vec<T> shift) : l_(std::move(linear)), b_(std::move(shift)) {
    if (l_.rows() != l_.cols() || l_.rows() != b_.dim())
      throw std::invalid_argument("affine map dimension mismatch");
  }
  static AffineMap identity(size_t n) { return AffineMap(Mat<T>::identity(n), Vec<T>(n)); }
  static AffineMap translation(const Vec<T>& t) { return AffineMap(Mat<T>::identity(t.dim()), t); }
  static AffineMap linear_map(const Mat<T>& a) { return AffineMap(a, Vec<T>(a.rows())); }
  // D(x) = A(x - theta) + theta.
  static AffineMap dilation_about(const Mat<T>& a, const Vec<T>& theta) {
    return AffineMap(a, theta - a * theta);
  }

  size_t dim() const { return b_.dim(); }
  const Mat<T>& linear() const { return l_; }
  const Vec<T>& shift() const { return b_; }

  Vec<T> apply(const Vec<T>& x) const {
    if (x.dim() != dim()) throw std::invalid_argument("affine map dimension mismatch");
    return l_ * x + b_;
  }
  Vec<T> operator()(const Vec<T>& x) const { return apply(x); }

  AffineMap inverse() const {
    Mat<T> li = cwave::inverse(l_);
    return AffineMap(li, -(li * b_));
  }
  bool is_translation() const { return l_ == Mat<T>::identity(dim()); }

  friend AffineMap compose(const AffineMap& g, const AffineMap& h) {
    if (g.dim() != h.dim()) throw std::invalid_argument("affine map dimension mismatch");
    return AffineMap(g.l_ * h.l_, g.l_ * h.b_ + g.b_);
  }
  friend bool operator==(const AffineMap& a, const AffineMap& b) { return a.l_ == b.l_ && a.b_ == b.b_; }
  friend bool operator!=(const AffineMap& a, const AffineMap& b) { return !(a == b); }
  friend bool operator<(const AffineMap& a, const AffineMap& b) {
    if (a.l_ != b.l_) return a.l_ < b.l_;
    return a.b_ < b.b_;
  }

 private:
  Mat<T> l_;
  Vec<T> b_;
};

// Exact or toleranced test of linear^T linear = identity.
template <class T>
bool is_isometry(const AffineMap<T>& g, double tol = 1e-12) {
  Mat<T> p = g.linear().transpose() * g.linear();
  Mat<T> id = Mat<T>::identity(g.dim());
  if constexpr (std::is_same_v<T, double>) {
    for (size_t i = 0; i < g.dim(); ++i)
      for (size_t j = 0; j < g.dim(); ++j)
        if (std::abs(p(i, j) - id(i, j)) > tol) return false;
    return true;
  } else {
    (void)tol;
    return p == id;
  }
}

template <class T>
using AffineIsometry = AffineMap<T>;

// Element-wise conversion between scalar types (exact -> double).
template <class To, class From>
Vec<To> convert(const Vec<From>& v) {
  Vec<To> r(v.dim());
  for (size_t i = 0; i < v.dim(); ++i) {
    if constexpr (std::is_same_v<To, double>) r[i] = to_double(v[i]);
    else r[i] = To(v[i]);
  }
  return r;
}
template <class To, class From>
Mat<To> convert(const Mat<From>& m) {
  Mat<To> r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<To, double>) r(i, j) = to_double(m(i, j));
      else r(i, j) = To(m(i, j));
    }
  return r;
}
template <class To, class From>
AffineMap<To> convert(const AffineMap<From>& g) {
  return AffineMap<To>(convert<To>(g.linear()), convert<To>(g.shift()));
}

}  // namespace cwave

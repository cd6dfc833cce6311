// Hyperplanes, reflections about them, and the expansive-matrix predicate.
#pragma once

#include "cwave/linalg.hpp"

#include <complex>
#include <vector>

namespace cwave {

// {x : <x, normal> = offset}.  When used as a wall of a convex figure the
// figure is taken to lie in the closed half-space <x, normal> <= offset.
template <class T>
struct Hyperplane {
  Vec<T> normal;
  T offset{0};

  Hyperplane() = default;
  Hyperplane(Vec<T> n, T c) : normal(std::move(n)), offset(std::move(c)) {
    bool nz = false;
    for (const auto& x : normal) nz = nz || !exact_zero(x);
    if (!nz) throw std::invalid_argument("hyperplane normal must be nonzero");
  }

  // Signed value <x, normal> - offset (not normalised).
  T side(const Vec<T>& x) const { return dot(x, normal) - offset; }
  bool contains(const Vec<T>& x) const { return exact_zero(side(x)); }

  // Affine reflection x -> x - 2(<x,n> - c)/<n,n> n.
  AffineMap<T> reflection() const {
    size_t n = normal.dim();
    T nn = dot(normal, normal);
    Mat<T> l = Mat<T>::identity(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) l(i, j) -= T(2) * normal[i] * normal[j] / nn;
    Vec<T> b = (T(2) * offset / nn) * normal;
    return AffineMap<T>(l, b);
  }
};

// Equality as point sets: (n, c) and (t n, t c) describe the same hyperplane.
template <class T>
bool same_hyperplane(const Hyperplane<T>& a, const Hyperplane<T>& b, double tol = 1e-12) {
  if (a.normal.dim() != b.normal.dim()) return false;
  size_t n = a.normal.dim();
  // Pick the first nonzero coordinate of a to fix the ratio t = b/a.
  size_t k = 0;
  while (k < n && exact_zero(a.normal[k])) ++k;
  if constexpr (std::is_same_v<T, double>) {
    if (std::abs(a.normal[k]) < tol) return false;
    double t = b.normal[k] / a.normal[k];
    for (size_t i = 0; i < n; ++i)
      if (std::abs(b.normal[i] - t * a.normal[i]) > tol) return false;
    return std::abs(b.offset - t * a.offset) <= tol * (1 + std::abs(b.offset));
  } else {
    (void)tol;
    if (exact_zero(b.normal[k])) return false;
    T t = b.normal[k] / a.normal[k];
    for (size_t i = 0; i < n; ++i)
      if (b.normal[i] != t * a.normal[i]) return false;
    return b.offset == t * a.offset;
  }
}

enum class ExpansiveMode { EigenvalueModulus, InverseNormDecay };

struct ExpansiveOptions {
  double epsilon = 0.5;     // ||A^{-l}|| < epsilon certifies expansiveness (needs epsilon < 1)
  int max_power = 10000;    // L_max
};

// True iff every eigenvalue of A has modulus > 1 (EigenvalueModulus), or iff
// ||A^{-l}||_F < epsilon for some l <= L_max (InverseNormDecay).  Throws
// std::domain_error("not invertible") for singular A and std::runtime_error
// when the eigenvalue solver does not converge or n > 4.
bool is_expansive(const Mat<double>& a, ExpansiveMode mode, const ExpansiveOptions& opt = {});
bool is_expansive(const Mat<Rational>& a, ExpansiveMode mode, const ExpansiveOptions& opt = {});

// Eigenvalues: closed form from the characteristic polynomial for n <= 2,
// Eigen's real-Schur (Francis QR) iteration for n <= 4.
std::vector<std::complex<double>> eigenvalues(const Mat<double>& a);

}  // namespace cwave

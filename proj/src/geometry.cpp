#include "cwave/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace cwave {

std::vector<std::complex<double>> eigenvalues(const Mat<double>& a) {
  size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("eigenvalues of non-square matrix");
  if (n == 1) return {std::complex<double>(a(0, 0), 0)};
  if (n == 2) {
    // lambda^2 - tr lambda + det = 0
    double tr = a(0, 0) + a(1, 1);
    double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4 * det, 0));
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
  }
  if (n > 4) throw std::runtime_error("eigenvalue routine limited to n <= 4; use inverse-norm-decay");
  Eigen::MatrixXd m(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

bool is_expansive(const Mat<double>& a, ExpansiveMode mode, const ExpansiveOptions& opt) {
  size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("expansive test needs a square matrix");
  double det = determinant(a);
  if (std::abs(det) < 1e-300) throw std::domain_error("not invertible");
  if (mode == ExpansiveMode::EigenvalueModulus) {
    // Moduli within 1e-12 of 1 count as "not > 1": they come from exact
    // unit-modulus eigenvalues (rotations, shears) perturbed by rounding.
    for (auto& ev : eigenvalues(a))
      if (std::abs(ev) <= 1.0 + 1e-12) return false;
    return true;
  }
  Mat<double> inv = inverse(a);
  Mat<double> p = inv;
  for (int l = 1; l <= opt.max_power; ++l) {
    double fro = 0;
    for (double x : p.data()) fro += x * x;
    fro = std::sqrt(fro);
    if (fro < opt.epsilon) return true;
    if (!std::isfinite(fro) || fro > 1e200) return false;
    p = p * inv;
  }
  return false;
}

bool is_expansive(const Mat<Rational>& a, ExpansiveMode mode, const ExpansiveOptions& opt) {
  if (determinant(a) == 0) throw std::domain_error("not invertible");
  return is_expansive(convert<double>(a), mode, opt);
}

}  // namespace cwave

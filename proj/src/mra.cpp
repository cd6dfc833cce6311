#include "cwave/mra.hpp"

#include <Eigen/Dense>
#include "json.hpp"

#include <cmath>

namespace cwave {

namespace {

using Q = Rational;
using VQ = Vec<Rational>;

Mat<double> to_double_mat(const Mat<Q>& m) {
  Mat<double> r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

Eigen::MatrixXd to_eigen(const Mat<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

Mat<double> from_eigen(const Eigen::MatrixXd& e) {
  Mat<double> m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

AffineMap<Q> scaling(size_t n, const Q& c) { return AffineMap<Q>::linear_map(c * Mat<Q>::identity(n)); }

std::vector<double> mat_vec(const Mat<double>& m, const std::vector<double>& x) {
  std::vector<double> y(m.rows(), 0.0);
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
  return y;
}

std::vector<double> mat_t_vec(const Mat<double>& m, const std::vector<double>& x) {
  std::vector<double> y(m.cols(), 0.0);
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) y[j] += m(i, j) * x[i];
  return y;
}

std::string word_string(const std::vector<int>& w) {
  if (w.empty()) return "e";
  std::string s;
  for (size_t k = 0; k < w.size(); ++k) s += (k ? "." : "") + std::to_string(w[k]);
  return s;
}

}  // namespace

FoldableFigure<Rational> mra_figure(const std::string& name) {
  if (name == "square") return unit_square();
  if (name == "triangle") {
    return make_figure<Q>("triangle", {VQ{0, 0}, VQ{-1, 0}, VQ{-1, 1}},
                          {Hyperplane<Q>(VQ{0, -1}, 0), Hyperplane<Q>(VQ{-1, 0}, 1), Hyperplane<Q>(VQ{1, 1}, 0)},
                          VQ{Q(-3, 4), Q(1, 4)});
  }
  throw std::invalid_argument("unknown MRA figure '" + name + "' (expected square or triangle)");
}

std::vector<Poly<Rational>> delta_kappa_cell(const std::vector<AffineMap<Rational>>& maps, const Rational& s,
                                             const std::vector<Poly<Rational>>& lambda, size_t j) {
  if (lambda.size() != maps.size() || j >= maps.size()) throw std::invalid_argument("delta_kappa: index mismatch");
  std::vector<Poly<Q>> out;
  for (size_t i = 0; i < maps.size(); ++i) out.push_back(lambda[j].compose(maps[i]) + s * (lambda[i] - lambda[j]));
  return out;
}

DataTable delta_kappa(const std::vector<AffineMap<Rational>>& maps, const Rational& s, int kappa,
                      const DataTable& table) {
  DataTable out;
  for (auto& [key, entry] : table.entries) {
    const auto& [r, lambda] = entry;
    AffineMap<Q> k = scaling(r.dim(), Q(kappa));
    for (size_t j = 0; j < maps.size(); ++j)
      out.set(compose(k, compose(r, maps[j])), delta_kappa_cell(maps, s, lambda, j));
  }
  return out;
}

// ---------------------------------------------------------------------------

CoxeterMRA::CoxeterMRA(MRAConfig config) : config_(std::move(config)) {
  if (config_.kappa < 2) throw std::invalid_argument("kappa must be >= 2");
  if (config_.degree < 0) throw std::invalid_argument("degree must be >= 0");
  if (abs_q(config_.s) >= 1) throw std::invalid_argument("scaling must satisfy |s| < 1");
  if (config_.mesh_depth < 0) throw std::invalid_argument("mesh depth must be >= 0");
  figure_ = mra_figure(config_.figure);
  const size_t n = figure_.dim();
  std::optional<size_t> origin;
  for (size_t v = 0; v < figure_.vertices.size(); ++v)
    if (figure_.vertices[v] == VQ(n)) origin = v;
  if (!origin) throw std::invalid_argument("the figure must have 0 as a vertex");
  sub_ = subdivide(figure_, config_.kappa, origin);
  const size_t N = sub_.size();

  // Continuous data space.
  auto cons = continuity_constraints(sub_.delta, sub_.maps, config_.s, config_.degree, config_.kappa);
  const size_t M = monomial_exponents(n, config_.degree).size();
  const size_t K = N * M;
  Mat<Q> rows(std::max<size_t>(cons.rows.size(), 1), K);
  for (size_t r = 0; r < cons.rows.size(); ++r)
    for (size_t b = 0; b < K; ++b) rows(r, b) = cons.rows[r][b];
  for (auto& v : null_space(rows)) basis_.emplace_back(v.begin(), v.end());
  if (basis_.empty()) throw std::domain_error("the continuous data space is trivial");
  const size_t dim = basis_.size();

  for (size_t k = 0; k < dim; ++k) {
    SurfaceSpec spec;
    spec.name = "e" + std::to_string(k + 1);
    spec.delta = sub_.delta;
    spec.maps = sub_.maps;
    spec.s = config_.s;
    spec.degree = config_.degree;
    spec.lambda = data_from_vector(n, config_.degree, N, basis_[k]);
    specs_.push_back(spec);
    surfaces_.emplace_back(spec);
  }

  // Exact Gram matrix and Gram-Schmidt.
  gram_ = Mat<Q>(dim, dim);
  for (size_t a = 0; a < dim; ++a)
    for (size_t b = a; b < dim; ++b) gram_(a, b) = gram_(b, a) = surface_inner_product(specs_[a], specs_[b]);
  C_ = orthonormalize(to_double_mat(gram_)).transpose();

  // r_i and the action of f -> f o u_i on the data space.
  Q kq(config_.kappa);
  for (size_t i = 0; i < N; ++i) {
    u_inv_.push_back(sub_.maps[i].inverse());
    r_.push_back(compose(u_inv_[i], scaling(n, Q(1) / kq)));
  }
  Mat<Q> E(K, dim);
  for (size_t k = 0; k < dim; ++k)
    for (size_t b = 0; b < K; ++b) E(b, k) = basis_[k][b];
  Mat<Q> normal_inv = inverse(E.transpose() * E);
  Eigen::MatrixXd Ce = to_eigen(C_);
  Eigen::MatrixXd Cinv = Ce.inverse();
  std::vector<Mat<double>> P;
  for (size_t i = 0; i < N; ++i) {
    Mat<Q> Mi(dim, dim);
    for (size_t k = 0; k < dim; ++k) {
      SurfaceSpec t = specs_[k];
      t.lambda = delta_kappa_cell(sub_.maps, config_.s, specs_[k].lambda, i);
      auto x = data_vector(t);
      Vec<Q> xv(x);
      Vec<Q> c = normal_inv * (E.transpose() * xv);
      if (E * c != xv) throw std::logic_error("dilated data left the continuous data space");
      for (size_t l = 0; l < dim; ++l) Mi(l, k) = c[l];
    }
    Eigen::MatrixXd Pi = Ce * to_eigen(to_double_mat(Mi)).transpose() * Cinv;
    P.push_back(from_eigen(Pi));
  }

  // Wavelet matrices: orthonormal complement of the rows of [P_1 ... P_N].
  double root = std::pow(static_cast<double>(config_.kappa), static_cast<double>(n) / 2.0);
  Eigen::MatrixXd U(N * dim, dim);
  for (size_t i = 0; i < N; ++i) U.block(i * dim, 0, dim, dim) = to_eigen(P[i]).transpose() / root;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(U);
  Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(N * dim, N * dim);
  Eigen::MatrixXd W = full.rightCols(N * dim - dim);
  std::vector<Mat<double>> Qm;
  for (size_t i = 0; i < N; ++i) Qm.push_back(from_eigen(W.block(i * dim, 0, dim, W.cols()).transpose() * root));

  bank_.figure = config_.figure;
  bank_.kappa = config_.kappa;
  bank_.degree = config_.degree;
  bank_.s = config_.s;
  bank_.dim_A = dim;
  bank_.dim_B = (N - 1) * dim;
  bank_.elements = r_;
  bank_.P = std::move(P);
  bank_.Q = std::move(Qm);
  // Words of r_i^{-1} = kappa u_i as reflections in the walls of Delta.
  Box<Q> region{VQ(n), VQ(n)};
  auto bb = sub_.delta.bounding_box();
  region.lo = kq * bb.lo;
  region.hi = kq * bb.hi;
  std::map<std::string, std::string> words;
  for (auto& c : enumerate_group(sub_.delta, region)) words[element_key(c.element.iso)] = word_string(c.element.word);
  for (size_t i = 0; i < N; ++i) {
    auto it = words.find(element_key(r_[i].inverse()));
    if (it == words.end()) throw std::logic_error("refinement translate is not in the reflection group of Delta");
    bank_.words.push_back(it->second);
  }
}

DimensionCount CoxeterMRA::dimensions() const {
  DimensionCount d;
  size_t N = cells();
  d.formula_A = static_cast<size_t>(config_.degree + 1) * N;
  d.formula_B = (N - 1) * d.formula_A;
  d.actual_A = basis_.size();
  d.actual_B = (N - 1) * basis_.size();
  return d;
}

std::vector<double> CoxeterMRA::phi_from_values(const std::vector<Rational>& basis_values) const {
  std::vector<double> v;
  for (auto& x : basis_values) v.push_back(to_double(x));
  return mat_vec(C_, v);
}

std::vector<double> CoxeterMRA::phi(const Vec<Rational>& x, int depth) const {
  std::vector<double> v;
  for (auto& f : surfaces_) v.push_back(f.evaluate(x, depth).enclosure.mid);
  return mat_vec(C_, v);
}

std::vector<double> CoxeterMRA::psi(const Vec<Rational>& x, int depth) const {
  if (!sub_.delta.contains(x)) throw std::out_of_range("point outside Delta");
  for (size_t i = 0; i < cells(); ++i) {
    VQ z = u_inv_[i](x);
    if (sub_.delta.contains(z)) return mat_vec(bank_.Q[i], phi(z, depth));
  }
  throw std::logic_error("subcells do not cover Delta");
}

Mat<double> CoxeterMRA::gram_phi() const { return C_ * to_double_mat(gram_) * C_.transpose(); }

std::vector<std::vector<Rational>> CoxeterMRA::basis_moments(int max_degree) const {
  std::vector<std::vector<Q>> out;
  for (auto& s : specs_) out.push_back(surface_moments(s, max_degree));
  return out;
}

Mat<double> CoxeterMRA::refinement_inner_products(size_t i) const {
  // <e_m, e_k o u_i> = int e_m lambda^k_i + s G(m, k).
  const size_t dim = basis_.size();
  auto mom = basis_moments(config_.degree);
  Mat<Q> X(dim, dim);
  for (size_t m = 0; m < dim; ++m)
    for (size_t k = 0; k < dim; ++k)
      X(m, k) = surface_poly_integral(mom[m], config_.degree, specs_[k].lambda[i]) + config_.s * gram_(m, k);
  return C_ * to_double_mat(X) * C_.transpose();
}

Mat<double> CoxeterMRA::gram_psi() const {
  size_t nb = bank_.dim_B;
  Mat<double> g(nb, nb);
  Mat<double> gp = gram_phi();
  double scale = 1.0 / static_cast<double>(cells());
  for (size_t i = 0; i < cells(); ++i) g = g + scale * (bank_.Q[i] * gp * bank_.Q[i].transpose());
  return g;
}

Mat<double> CoxeterMRA::cross_gram() const {
  // <psi^b, phi^a> = sum_i |Delta_i|/|Delta| sum_c Q_i(b, c) <phi^c, phi^a o u_i>.
  Mat<double> g(bank_.dim_B, bank_.dim_A);
  double scale = 1.0 / static_cast<double>(cells());
  for (size_t i = 0; i < cells(); ++i) g = g + scale * (bank_.Q[i] * refinement_inner_products(i));
  return g;
}

double CoxeterMRA::refinement_residual(int depth) const {
  if (depth < 1) throw std::invalid_argument("refinement check needs depth >= 1");
  std::vector<std::map<VQ, Q>> tables;
  for (auto& f : surfaces_) tables.push_back(f.vertex_table(depth));
  auto values_at = [&](const VQ& y) {
    std::vector<Q> v;
    for (auto& t : tables) v.push_back(t.at(y));
    return phi_from_values(v);
  };
  double worst = 0;
  for (auto& [y, unused] : tables.front()) {
    (void)unused;
    auto lhs = values_at(y);
    for (size_t i = 0; i < cells(); ++i) {
      VQ z = u_inv_[i](y);
      if (!sub_.delta.contains(z)) continue;
      auto rhs = mat_vec(bank_.P[i], values_at(z));
      for (size_t a = 0; a < lhs.size(); ++a) worst = std::max(worst, std::abs(lhs[a] - rhs[a]));
    }
  }
  return worst;
}

double CoxeterMRA::projection_error(const Poly<Rational>& g, int level) const {
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  int deg = std::max(g.degree(), 0);
  auto mom = basis_moments(deg);
  Q norm2 = polygon_integral(g * g, sub_.delta.vertices);
  // Words of length `level`: compositions u_w = u_{w0} o ... o u_{w(level-1)}.
  std::vector<AffineMap<Q>> words{AffineMap<Q>::identity(figure_.dim())};
  for (int l = 0; l < level; ++l) {
    std::vector<AffineMap<Q>> next;
    for (auto& w : words)
      for (auto& u : sub_.maps) next.push_back(compose(w, u));
    words = std::move(next);
  }
  double captured = 0;
  double cell_measure = std::pow(static_cast<double>(cells()), -level);
  for (auto& w : words) {
    Poly<Q> gw = g.compose(w);
    std::vector<double> e;
    for (auto& m : mom) e.push_back(to_double(surface_poly_integral(m, deg, gw)));
    for (double c : mat_vec(C_, e)) captured += cell_measure * c * c;
  }
  return to_double(norm2) - captured;
}

CoefficientTable CoxeterMRA::project(const Poly<Rational>& g, const std::vector<AffineMap<Rational>>& elements) const {
  int deg = std::max(g.degree(), 0);
  auto mom = basis_moments(deg);
  CoefficientTable out;
  for (auto& r : elements) {
    // <g, phi^a o r> = int_Delta g(r^{-1} z) phi^a(z) dz
    Poly<Q> gr = g.compose(r.inverse());
    std::vector<double> e;
    for (auto& m : mom) e.push_back(to_double(surface_poly_integral(m, deg, gr)));
    out.set(r, mat_vec(C_, e));
  }
  return out;
}

std::vector<AffineMap<Rational>> CoxeterMRA::translates(const Box<Rational>& region) const {
  std::vector<AffineMap<Q>> out;
  for (auto& c : enumerate_group(sub_.delta, region)) out.push_back(c.element.iso.inverse());
  return out;
}

Decomposition CoxeterMRA::analyze(const CoefficientTable& fine) const {
  const size_t n = figure_.dim(), N = cells(), dimA = bank_.dim_A;
  Q kq(config_.kappa);
  AffineMap<Q> up = scaling(n, kq), down = scaling(n, Q(1) / kq);
  std::map<std::string, size_t> r_index;
  for (size_t i = 0; i < N; ++i) r_index[element_key(r_[i])] = i;
  // Group the fine translates by their coarse parent rho: g = r_i o kappa rho kappa^{-1}.
  struct Parent {
    AffineMap<Q> rho;
    std::vector<std::vector<double>> child;
  };
  std::map<std::string, Parent> parents;
  for (auto& [key, entry] : fine.entries) {
    const auto& [g, c] = entry;
    if (c.size() != dimA) throw std::invalid_argument("coefficient vector has the wrong length");
    VQ y = down(g.inverse()(sub_.delta.theta));
    auto [z, w] = fold(sub_.delta, y);
    (void)z;
    AffineMap<Q> rho = w.iso.inverse();
    AffineMap<Q> rho_t = compose(up, compose(rho, down));
    AffineMap<Q> ri = compose(g, rho_t.inverse());
    auto it = r_index.find(element_key(ri));
    if (it == r_index.end()) throw std::logic_error("translate does not refine a coarse cell");
    auto& p = parents[element_key(rho)];
    if (p.child.empty()) {
      p.rho = rho;
      p.child.assign(N, std::vector<double>(dimA, 0.0));
    }
    p.child[it->second] = c;
  }
  double root = std::pow(static_cast<double>(config_.kappa), static_cast<double>(n) / 2.0);
  Decomposition d;
  for (auto& [key, p] : parents) {
    std::vector<double> a(dimA, 0.0), b(bank_.dim_B, 0.0);
    for (size_t i = 0; i < N; ++i) {
      auto pa = mat_vec(bank_.P[i], p.child[i]);
      auto qb = mat_vec(bank_.Q[i], p.child[i]);
      for (size_t k = 0; k < a.size(); ++k) a[k] += pa[k] / root;
      for (size_t k = 0; k < b.size(); ++k) b[k] += qb[k] / root;
    }
    d.coarse.set(p.rho, a);
    d.detail.set(p.rho, b);
  }
  return d;
}

CoefficientTable CoxeterMRA::synthesize(const Decomposition& d) const {
  const size_t n = figure_.dim(), N = cells(), dimA = bank_.dim_A;
  Q kq(config_.kappa);
  AffineMap<Q> up = scaling(n, kq), down = scaling(n, Q(1) / kq);
  double root = std::pow(static_cast<double>(config_.kappa), static_cast<double>(n) / 2.0);
  std::map<std::string, AffineMap<Q>> keys;
  for (auto& [k, e] : d.coarse.entries) keys.emplace(k, e.first);
  for (auto& [k, e] : d.detail.entries) keys.emplace(k, e.first);
  CoefficientTable out;
  for (auto& [key, rho] : keys) {
    std::vector<double> a(dimA, 0.0), b(bank_.dim_B, 0.0);
    if (auto it = d.coarse.entries.find(key); it != d.coarse.entries.end()) a = it->second.second;
    if (auto it = d.detail.entries.find(key); it != d.detail.entries.end()) b = it->second.second;
    if (a.size() != dimA || b.size() != bank_.dim_B) throw std::invalid_argument("coefficient vector has the wrong length");
    AffineMap<Q> rho_t = compose(up, compose(rho, down));
    for (size_t i = 0; i < N; ++i) {
      auto c = mat_t_vec(bank_.P[i], a);
      auto cq = mat_t_vec(bank_.Q[i], b);
      for (size_t k = 0; k < dimA; ++k) c[k] = (c[k] + cq[k]) / root;
      out.set(compose(r_[i], rho_t), c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json rational_json(const Q& q) { return q.str(); }
Q rational_from(const nlohmann::json& j) { return Q(j.get<std::string>()); }

nlohmann::json matrix_json(const Mat<double>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat<double> matrix_from(const nlohmann::json& j, size_t rows, size_t cols) {
  if (j.size() != rows) throw std::invalid_argument("matrix has the wrong number of rows");
  Mat<double> m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw std::invalid_argument("matrix has the wrong number of columns");
    for (size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

}  // namespace

std::string filter_bank_to_json(const FilterBank& fb) {
  nlohmann::json j;
  j["figure"] = fb.figure;
  j["kappa"] = fb.kappa;
  j["degree"] = fb.degree;
  j["s"] = rational_json(fb.s);
  j["dim_A"] = fb.dim_A;
  j["dim_B"] = fb.dim_B;
  j["words"] = fb.words;
  nlohmann::json els = nlohmann::json::array();
  for (auto& g : fb.elements) {
    nlohmann::json lin = nlohmann::json::array(), shift = nlohmann::json::array();
    for (size_t r = 0; r < g.dim(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (size_t c = 0; c < g.dim(); ++c) row.push_back(rational_json(g.linear()(r, c)));
      lin.push_back(row);
      shift.push_back(rational_json(g.shift()[r]));
    }
    els.push_back({{"linear", lin}, {"shift", shift}});
  }
  j["elements"] = els;
  nlohmann::json P = nlohmann::json::array(), Qj = nlohmann::json::array();
  for (auto& m : fb.P) P.push_back(matrix_json(m));
  for (auto& m : fb.Q) Qj.push_back(matrix_json(m));
  j["P"] = P;
  j["Q"] = Qj;
  return j.dump(2) + "\n";
}

FilterBank filter_bank_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  FilterBank fb;
  fb.figure = j.at("figure").get<std::string>();
  fb.kappa = j.at("kappa").get<int>();
  fb.degree = j.at("degree").get<int>();
  fb.s = rational_from(j.at("s"));
  fb.dim_A = j.at("dim_A").get<size_t>();
  fb.dim_B = j.at("dim_B").get<size_t>();
  fb.words = j.at("words").get<std::vector<std::string>>();
  for (auto& e : j.at("elements")) {
    size_t n = e.at("shift").size();
    Mat<Q> lin(n, n);
    VQ shift(n);
    for (size_t r = 0; r < n; ++r) {
      shift[r] = rational_from(e["shift"][r]);
      for (size_t c = 0; c < n; ++c) lin(r, c) = rational_from(e["linear"][r][c]);
    }
    fb.elements.emplace_back(lin, shift);
  }
  for (auto& m : j.at("P")) fb.P.push_back(matrix_from(m, fb.dim_A, fb.dim_A));
  for (auto& m : j.at("Q")) fb.Q.push_back(matrix_from(m, fb.dim_B, fb.dim_A));
  if (fb.P.size() != fb.elements.size() || fb.Q.size() != fb.elements.size() || fb.words.size() != fb.elements.size())
    throw std::invalid_argument("filter bank tables have inconsistent lengths");
  return fb;
}

}  // namespace cwave

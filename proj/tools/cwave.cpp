// cwave: command-line front end for fractal functions and surfaces, the
// Coxeter multiresolution analysis and the wavelet-set engine.
//
// Exit codes: 0 success, 1 numerical or verification failure, 2 usage error.

#include "cwave/fif.hpp"
#include "cwave/io.hpp"
#include "cwave/mra.hpp"
#include "cwave/reflections.hpp"
#include "cwave/surfaces.hpp"
#include "cwave/tiles.hpp"
#include "cwave/wavelet_sets.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cwave;

namespace {

constexpr int kOk = 0, kFailure = 1, kUsage = 2;

// Usage errors discovered after parsing (values that pass the syntactic
// validators but are inconsistent).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every flag of every command; validated by CLI11 before dispatch.
struct RunConfig {
  std::string out_dir;  // prefix for relative output paths (CWAVE_OUT_DIR)

  // fif
  std::string fif_name = "ex3.3";
  int fif_depth = 8;
  int fif_n = 3;
  std::string fif_mode = "translation";
  std::string fif_s = "1/2";
  std::string fif_gram = "moment";
  int fif_quad_depth = 12;

  // surface
  std::string surface_name = "ex5.2";
  int surface_depth = 6;

  // mra
  std::string mra_figure = "square";
  int mra_kappa = 2;
  int mra_degree = 1;
  std::string mra_s = "1/2";
  int mra_mesh_depth = 5;
  double mra_tolerance = 1e-6;

  // tiles
  int tiles_depth = 8;
  std::string tiles_verify = "all";
  std::string tiles_set;  // JSON input for `tiles verify`
  std::string tiles_bound = "0";
  int construct_dim = 1;
  double construct_epsilon = 1e-6;
  int construct_max_iterations = 50;
  int construct_max_shell = 16;
  std::vector<std::string> vectors;

  // reflections
  std::string tess_figure = "unit-square";
  double tess_radius = 2;

  // outputs
  std::string csv, svg, out;
};

std::string resolve(const RunConfig& cfg, const std::string& path) {
  if (path.empty() || cfg.out_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(cfg.out_dir) / path).string();
}

void emit(const RunConfig& cfg, const std::string& path, const std::string& text, const char* what) {
  if (path.empty()) return;
  std::string p = resolve(cfg, path);
  write_text(p, text);
  std::cout << "wrote " << what << " " << p << "\n";
}

Rational parse_user_rational(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": not a rational number: " + text);
  }
}

std::string join_values(const std::vector<Rational>& xs) {
  std::string out;
  for (size_t k = 0; k < xs.size(); ++k) out += (k ? ", " : "") + to_string(xs[k]);
  return out;
}

double max_abs_deviation_from_identity(const Mat<double>& m) {
  double worst = 0;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) worst = std::max(worst, std::fabs(m(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

double max_abs(const Mat<double>& m) {
  double worst = 0;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) worst = std::max(worst, std::fabs(m(i, j)));
  return worst;
}

// ---------------------------------------------------------------------------
// fif

int run_fif_example(const RunConfig& cfg) {
  std::vector<std::string> names = {cfg.fif_name};
  if (cfg.fif_name == "ex3.5") names = {"ex3.5-translation", "ex3.5-reflection"};
  std::vector<GraphSeries> series;
  std::vector<std::vector<std::pair<double, double>>> graphs;
  bool ok = true;
  for (auto& name : names) {
    FractalFunction f = fif_fixture(name);
    std::vector<Rational> values;
    for (auto& x : f.knots()) {
      EvalResult r = f.evaluate(x);
      if (!r.exact) throw std::runtime_error("knot value of " + name + " is not exact");
      values.push_back(r.value);
    }
    std::cout << name << ": knots " << join_values(f.knots()) << "\n";
    std::cout << name << ": knot values " << join_values(values) << "\n";
    std::cout << name << ": continuous " << (f.is_continuous() ? "yes" : "no") << "\n";
    if (!f.is_continuous()) ok = false;
    auto pts = f.sample(cfg.fif_depth);
    series.push_back({name, pts});
    graphs.push_back(pts);
  }
  if (!cfg.csv.empty()) {
    std::string text = names.size() == 1 ? graph_csv(graphs[0]) : graphs_csv(names, graphs);
    emit(cfg, cfg.csv, text, "csv");
  }
  emit(cfg, cfg.svg, graphs_svg(series, cfg.fif_name), "svg");
  return ok ? kOk : kFailure;
}

int run_fif_basis(const RunConfig& cfg) {
  Rational s = parse_user_rational(cfg.fif_s, "--s");
  if (abs_q(s) >= 1) throw UsageError("--s: |s| must be < 1");
  PartitionMode mode = cfg.fif_mode == "reflection" ? PartitionMode::Reflection : PartitionMode::Translation;
  auto maps = build_maps(mode, cfg.fif_n);
  FractalBasis basis = cardinal_basis(0, cfg.fif_n, maps, std::vector<Rational>(cfg.fif_n, s));
  std::cout << "basis functions: " << basis.e.size() << " (" << cfg.fif_mode << " maps, N = " << cfg.fif_n
            << ", s = " << to_string(s) << ")\n";

  GramMethod method = cfg.fif_gram == "quadrature" ? GramMethod::Quadrature : GramMethod::MomentRecursion;
  GramResult g = gram_matrix(basis.e, method, cfg.fif_quad_depth);
  if (!g.warning.empty()) std::cout << "warning: " << g.warning << "\n";
  std::cout << "gram matrix (" << (g.method_used == GramMethod::Quadrature ? "quadrature" : "moment recursion")
            << "):\n";
  for (size_t i = 0; i < g.gram.rows(); ++i) {
    std::cout << " ";
    for (size_t j = 0; j < g.gram.cols(); ++j) std::cout << " " << format_full(g.gram(i, j));
    std::cout << "\n";
  }
  Mat<double> q = orthonormalize(g.gram);
  double dev = max_abs_deviation_from_identity(q.transpose() * g.gram * q);
  std::cout << "orthonormalized: max |Q^T G Q - I| = " << format_full(dev) << "\n";

  std::vector<GraphSeries> series;
  std::vector<std::string> names;
  std::vector<std::vector<std::pair<double, double>>> graphs;
  for (size_t k = 0; k < basis.e.size(); ++k) {
    names.push_back("e" + std::to_string(k));
    graphs.push_back(basis.e[k].sample(cfg.fif_depth));
    series.push_back({names.back(), graphs.back()});
  }
  if (!cfg.csv.empty()) emit(cfg, cfg.csv, graphs_csv(names, graphs), "csv");
  emit(cfg, cfg.svg, graphs_svg(series, "cardinal basis, " + cfg.fif_mode), "svg");
  return dev <= 1e-8 ? kOk : kFailure;
}

// ---------------------------------------------------------------------------
// surface

int run_surface_fixture(const RunConfig& cfg) {
  SurfaceSpec spec = surface_fixture(cfg.surface_name);
  ConditionReport rep = validate_condition_star(spec);
  std::cout << "face conditions: " << (rep.ok ? "continuous" : "violated") << " (" << rep.constraints_checked
            << " constraints); literal face matching: " << (rep.literal_ok ? "holds" : "fails") << "\n";
  for (auto& v : rep.violations) std::cout << "  violation on face " << v.i << "-" << v.j << ": " << v.detail << "\n";
  if (!rep.ok) return kFailure;

  FractalSurface f = fixed_point(spec);
  Rational jump;
  auto table = f.vertex_table(cfg.surface_depth, &jump);
  bool outer_zero = true;
  std::cout << "outer vertices:";
  for (size_t k = 0; k < spec.delta.vertices.size(); ++k) {
    Rational z = f.delta_vertex_values()[k];
    outer_zero = outer_zero && z == 0;
    std::cout << " (" << to_string(spec.delta.vertices[k][0]) << "," << to_string(spec.delta.vertices[k][1])
              << ")=" << to_string(z);
  }
  std::cout << "\n";
  if (spec.name == "ex5.2") {
    // Inner vertices: the midpoints of the edges of the triangle.
    std::vector<std::pair<Vec<Rational>, Rational>> inner = {{{Rational(1, 2), 0}, Rational(1, 2)},
                                                             {{Rational(1, 2), Rational(1, 2)}, Rational(1, 2)},
                                                             {{0, Rational(1, 2)}, Rational(3, 10)}};
    std::cout << "inner vertices (fixed point / reference):";
    for (auto& [p, reference] : inner) {
      EvalResult r = f.evaluate(p);
      std::cout << " (" << to_string(p[0]) << "," << to_string(p[1]) << ")=" << to_string(r.value) << "/"
                << to_string(reference) << (r.value == reference ? "" : " [differs]");
    }
    std::cout << "\n";
  }
  std::cout << "mesh depth " << cfg.surface_depth << ": " << table.size() << " vertices, max jump "
            << to_string(jump) << "\n";
  emit(cfg, cfg.csv, surface_csv(table), "csv");
  if (!cfg.svg.empty()) emit(cfg, cfg.svg, surface_svg(f.mesh(std::min(cfg.surface_depth, 6)), spec.name), "svg");
  return outer_zero && jump == 0 ? kOk : kFailure;
}

int run_surface_basis(const RunConfig& cfg) {
  SurfaceSpec spec = surface_fixture(cfg.surface_name);
  BasisFamily fam = basis_surfaces(spec);
  std::cout << "basis surfaces: " << fam.specs.size() << "\n";
  bool ok = true;
  for (size_t k = 0; k < fam.specs.size(); ++k) {
    auto& v = fam.vertices[k];
    std::cout << "  phi at (" << to_string(v[0]) << "," << to_string(v[1])
              << "): " << (fam.reports[k].ok ? "continuous" : "discontinuous") << "\n";
    ok = ok && fam.reports[k].ok;
  }
  if (!cfg.csv.empty() || !cfg.svg.empty()) {
    // Sum of the basis surfaces weighted by the fixture's vertex values.
    FractalSurface f = fixed_point(spec);
    emit(cfg, cfg.csv, surface_csv(f.vertex_table(cfg.surface_depth)), "csv");
    if (!cfg.svg.empty()) emit(cfg, cfg.svg, surface_svg(f.mesh(std::min(cfg.surface_depth, 6)), spec.name), "svg");
  }
  return ok ? kOk : kFailure;
}

// ---------------------------------------------------------------------------
// mra

int run_mra_build(const RunConfig& cfg) {
  MRAConfig mc;
  mc.figure = cfg.mra_figure;
  mc.kappa = cfg.mra_kappa;
  mc.degree = cfg.mra_degree;
  mc.s = parse_user_rational(cfg.mra_s, "--s");
  mc.mesh_depth = cfg.mra_mesh_depth;
  if (abs_q(mc.s) >= 1) throw UsageError("--s: |s| must be < 1");
  CoxeterMRA mra(mc);
  DimensionCount d = mra.dimensions();
  std::cout << "cells N = " << mra.cells() << "\n";
  std::cout << "|A| = " << d.actual_A << " (formula " << d.formula_A << "), |B| = " << d.actual_B << " (formula "
            << d.formula_B << ")" << (d.matches() ? "" : " [dimension formula differs]") << "\n";
  double gphi = max_abs_deviation_from_identity(mra.gram_phi());
  double gpsi = max_abs_deviation_from_identity(mra.gram_psi());
  double cross = max_abs(mra.cross_gram());
  double refine = mra.refinement_residual(cfg.mra_mesh_depth);
  std::cout << "max |Gram(Phi) - I| = " << format_full(gphi) << "\n";
  std::cout << "max |Gram(Psi) - I| = " << format_full(gpsi) << "\n";
  std::cout << "max |<Psi, Phi>| = " << format_full(cross) << "\n";
  std::cout << "refinement residual (depth " << cfg.mra_mesh_depth << ") = " << format_full(refine) << "\n";
  emit(cfg, cfg.out, filter_bank_to_json(mra.filter_bank()), "filter bank");
  bool ok = gphi <= 1e-8 && gpsi <= 1e-8 && cross <= 1e-8 && refine <= cfg.mra_tolerance;
  return ok ? kOk : kFailure;
}

// ---------------------------------------------------------------------------
// tiles

void print_certificate_line(const char* label, const CongruenceCertificate& c, const Scalar& bound, bool ok) {
  std::cout << label << ": residual " << c.defect().str() << " (" << format_full(to_double(c.defect())) << ") "
            << (ok ? "<=" : ">") << " bound " << bound.str() << " -> " << (ok ? "ok" : "FAIL") << "\n";
}

int report_three_way(const DyadicBoxSet& W, const Scalar& bound, const std::string& verify) {
  ThreeWayReport rep = three_way_check(W, lattice_2pi(2), square_weyl(), dyadic_dilations(2), bound);
  bool ok = true;
  if (verify == "all" || verify == "translation") {
    print_certificate_line("translation", rep.translation, bound, rep.translation_ok);
    ok = ok && rep.translation_ok;
  }
  if (verify == "all" || verify == "weyl") {
    print_certificate_line("weyl", rep.weyl, bound, rep.weyl_ok);
    ok = ok && rep.weyl_ok;
  }
  if (verify == "all" || verify == "dilation") {
    print_certificate_line("dilation", rep.dilation, bound, rep.dilation_ok);
    ok = ok && rep.dilation_ok;
  }
  return ok ? kOk : kFailure;
}

int run_tiles_fixture(const RunConfig& cfg, bool first) {
  WaveletSetFixture w = first ? build_w1(cfg.tiles_depth) : build_w2(cfg.tiles_depth);
  std::cout << w.name << " depth " << w.depth << ": " << w.set.boxes().size() << " boxes, measure "
            << w.set.measure().str() << "\n";
  std::cout << "tail per copy " << w.tail.str() << ", copies " << w.copies << ", tail bound "
            << w.residual_bound().str() << "\n";
  auto statements = first ? w1_statements(w) : w2_statements(w);
  for (auto& s : statements)
    std::cout << "statement " << s.statement << ": " << (s.holds ? "holds" : "does not hold")
              << (s.detail.empty() ? "" : " (" + s.detail + ")") << "\n";
  int code = kOk;
  if (cfg.tiles_verify != "none") code = report_three_way(w.set, w.residual_bound(), cfg.tiles_verify);
  emit(cfg, cfg.out, w.set.to_json(), "set");
  if (!cfg.svg.empty()) {
    std::vector<ShadedSet> parts;
    for (auto& p : w.parts)
      if (p.name.rfind("A", 0) == 0) parts.push_back({p.name, p.set});
    emit(cfg, cfg.svg, box_sets_svg(parts, w.name + ", depth " + std::to_string(w.depth)), "svg");
  }
  return code;
}

int run_tiles_shannon(const RunConfig& cfg) {
  DyadicBoxSet E = shannon_set();
  WaveletSetVerdict v = wavelet_set_criterion(E);
  std::cout << "translation residual " << v.translation.defect().str() << ", pieces " << v.translation.pieces.size()
            << "\n";
  std::cout << "dilation residual " << v.dilation.defect().str() << ", pieces " << v.dilation.pieces.size() << "\n";
  std::cout << (v.is_wavelet_set() ? "wavelet set" : "not a wavelet set") << "\n";
  emit(cfg, cfg.out, E.to_json(), "set");
  return v.is_wavelet_set() ? kOk : kFailure;
}

int run_tiles_verify(const RunConfig& cfg) {
  DyadicBoxSet W;
  try {
    W = DyadicBoxSet::from_json(read_text(cfg.tiles_set));
  } catch (const std::exception& e) {
    throw UsageError(std::string("--set: ") + e.what());
  }
  if (W.dim() != 2 || W.unit_power() != 1) throw UsageError("--set: a planar set in units of pi is expected");
  Rational b = parse_user_rational(cfg.tiles_bound, "--bound");
  return report_three_way(W, Scalar(b, 2), cfg.tiles_verify);
}

int run_tiles_construct(const RunConfig& cfg) {
  ConstructionOptions opt;
  opt.epsilon = cfg.construct_epsilon;
  opt.max_iterations = cfg.construct_max_iterations;
  opt.max_shell = cfg.construct_max_shell;
  DyadicBoxSet E, F;
  GroupSpec tiling, dil;
  if (cfg.construct_dim == 1) {
    E = cube_C(1);
    F = shannon_set();
    tiling = lattice_2pi(1);
    dil = dyadic_dilations(1);
  } else {
    E = cube_C(2);
    F = dilation_shell(2);
    tiling = square_weyl();
    dil = dyadic_dilations(2);
  }
  std::cout << "tiling group: " << tiling.describe() << "\n";
  std::cout << "dilation group: " << dil.describe() << "\n";
  ConstructionResult r;
  try {
    r = construct_wavelet_set(E, F, tiling, dil, opt);
  } catch (const ConstructionError& e) {
    std::cout << "construction failed: " << e.what() << " (best residual " << format_full(e.best_residual) << ")\n";
    return kFailure;
  }
  std::cout << "iterations " << r.iterations << (r.trivial ? " (epsilon >= m(E): E returned)" : "") << "\n";
  for (size_t k = 0; k < r.history.size(); ++k)
    std::cout << "  step " << k + 1 << ": defect " << format_full(r.history[k]) << "\n";
  // Independent re-certification from scratch.
  CongruenceCertificate toE = tiling.kind == GroupKind::Weyl ? weyl_congruent(r.set, tiling, E)
                                                             : translation_congruent(r.set, E, tiling);
  CongruenceCertificate toF = dilation_congruent(r.set, F, dil);
  CertificateCheck cE = verify_certificate(toE, r.set, E, tiling);
  CertificateCheck cF = verify_certificate(toF, r.set, F, dil);
  double dE = to_double(toE.defect()), dF = to_double(toF.defect());
  std::cout << "re-certified " << to_string(tiling.kind) << " residual " << format_full(dE) << " ("
            << (cE.ok ? "certificate verified" : "certificate REJECTED") << ")\n";
  std::cout << "re-certified dilation residual " << format_full(dF) << " ("
            << (cF.ok ? "certificate verified" : "certificate REJECTED") << ")\n";
  emit(cfg, cfg.out, r.set.to_json(), "set");
  if (!cfg.svg.empty() && r.set.dim() == 2) emit(cfg, cfg.svg, box_sets_svg({{"W", r.set}}, "constructed set"), "svg");
  bool ok = cE.ok && cF.ok && (r.trivial || (dE <= opt.epsilon && dF <= opt.epsilon));
  return ok ? kOk : kFailure;
}

int run_tiles_intersection(const RunConfig& cfg) {
  auto figure = square_C();
  std::vector<Vec<Scalar>> lattice = {{Scalar::pi(2), Scalar(0)}, {Scalar(0), Scalar::pi(2)}};
  IntersectionGroup J = intersection_group(figure, lattice);
  auto show = [](const std::vector<Vec<Scalar>>& vs) {
    std::string out;
    for (auto& v : vs) out += " (" + v[0].str() + ", " + v[1].str() + ")";
    return out;
  };
  std::cout << "reflection-group translations:" << show(J.weyl_translations) << "\n";
  std::cout << "lattice:" << show(J.lattice) << "\n";
  std::cout << "intersection generators:" << show(J.generators) << "\n";
  for (auto& text : cfg.vectors) {
    // "a,b" in units of pi.
    auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("--member: expected a,b (units of pi)");
    Vec<Scalar> v{Scalar::pi(parse_user_rational(text.substr(0, comma), "--member")),
                  Scalar::pi(parse_user_rational(text.substr(comma + 1), "--member"))};
    std::cout << "translation by (" << v[0].str() << ", " << v[1].str() << "): "
              << (J.contains(v) ? "in J" : "not in J") << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// reflections

int run_reflections_klein(const RunConfig&) {
  KleinFour k = klein_four_group();
  auto prod = compose(k.generators[0], k.generators[1]);
  bool id = compose(prod, prod) == AffineMap<Rational>::identity(2);
  std::cout << "root system: " << (k.roots.validate().ok ? "valid" : "invalid") << "\n";
  std::cout << "group order " << k.elements.size() << ", (rho1 rho2)^2 = id: " << (id ? "yes" : "no") << "\n";
  return k.elements.size() == 4 && id ? kOk : kFailure;
}

int run_reflections_tessellate(const RunConfig& cfg) {
  FoldableFigure<Rational> fig;
  if (cfg.tess_figure == "unit-square") fig = unit_square();
  else if (cfg.tess_figure == "right-triangle") fig = right_triangle();
  else fig = right_triangle_cell();
  Rational r = parse_user_rational(format_full(cfg.tess_radius), "--radius");
  Box<Rational> region{{-r, -r}, {r, r}};
  auto cells = enumerate_group(fig, region);
  std::cout << fig.name << ": " << cells.size() << " cells meet [-" << to_string(r) << ", " << to_string(r)
            << "]^2\n";
  if (!cfg.svg.empty()) {
    std::vector<MeshCell> mesh;
    for (auto& c : cells) mesh.push_back({c.element.word, c.vertices,
                                          std::vector<Rational>(c.vertices.size(), Rational(c.element.word.size()))});
    emit(cfg, cfg.svg, surface_svg(mesh, fig.name + " tessellation (shade = word length)"), "svg");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"cwave: fractal interpolation, Coxeter multiresolution analysis and wavelet sets"};
  app.set_config("--config", "", "TOML/INI file overriding option defaults");
  app.option_defaults()->always_capture_default();
  app.add_option("--out-dir", cfg.out_dir, "Directory for relative output paths")->envname("CWAVE_OUT_DIR");
  app.require_subcommand(1);

  auto outputs = [&](CLI::App* c, bool csv, bool svg, bool out) {
    if (csv) c->add_option("--csv", cfg.csv, "CSV output path");
    if (svg) c->add_option("--svg", cfg.svg, "SVG output path");
    if (out) c->add_option("--out", cfg.out, "JSON output path");
  };

  // fif
  auto* fif = app.add_subcommand("fif", "One-dimensional fractal interpolation functions");
  fif->require_subcommand(1);
  auto* fex = fif->add_subcommand("example", "Evaluate a named fractal function");
  std::vector<std::string> fif_names = fif_fixture_names();
  fif_names.push_back("ex3.5");
  fex->add_option("--name", cfg.fif_name, "Fixture name")->check(CLI::IsMember(fif_names));
  fex->add_option("--depth", cfg.fif_depth, "Sampling level of the orbit lattice")->check(CLI::Range(0, 14));
  outputs(fex, true, true, false);
  auto* fba = fif->add_subcommand("basis", "Cardinal basis, Gram matrix and orthonormalization");
  fba->add_option("--n", cfg.fif_n, "Number of cells N")->check(CLI::Range(2, 12));
  fba->add_option("--mode", cfg.fif_mode, "Partition maps")->check(CLI::IsMember({"translation", "reflection"}));
  fba->add_option("--s", cfg.fif_s, "Common scaling factor (rational)");
  fba->add_option("--gram", cfg.fif_gram, "Gram method")->check(CLI::IsMember({"moment", "quadrature"}));
  fba->add_option("--quad-depth", cfg.fif_quad_depth, "Quadrature depth")->check(CLI::Range(1, 16));
  fba->add_option("--depth", cfg.fif_depth, "Sampling level for exports")->check(CLI::Range(0, 12));
  outputs(fba, true, true, false);

  // surface
  auto* surf = app.add_subcommand("surface", "Fractal surfaces over foldable figures");
  surf->require_subcommand(1);
  auto* sfx = surf->add_subcommand("fixture", "Fixed point of a named surface and its vertex values");
  sfx->add_option("--name", cfg.surface_name, "Fixture name")->check(CLI::IsMember({"ex5.2"}));
  sfx->add_option("--depth", cfg.surface_depth, "Mesh depth")->check(CLI::Range(0, 8));
  outputs(sfx, true, true, false);
  auto* sba = surf->add_subcommand("basis", "Basis surfaces for the fixture's maps");
  sba->add_option("--name", cfg.surface_name, "Fixture name")->check(CLI::IsMember({"ex5.2"}));
  sba->add_option("--depth", cfg.surface_depth, "Mesh depth")->check(CLI::Range(0, 8));
  outputs(sba, true, true, false);

  // mra
  auto* mra = app.add_subcommand("mra", "Coxeter multiresolution analysis");
  mra->require_subcommand(1);
  auto* mbu = mra->add_subcommand("build", "Scaling/wavelet vectors and the filter bank");
  mbu->add_option("--figure", cfg.mra_figure, "Figure")->check(CLI::IsMember({"square", "triangle"}));
  mbu->add_option("--kappa", cfg.mra_kappa, "Dilation factor")->check(CLI::Range(2, 3));
  mbu->add_option("--degree", cfg.mra_degree, "Polynomial degree of the data")->check(CLI::Range(0, 2));
  mbu->add_option("--s", cfg.mra_s, "Scaling of the fractal surfaces (rational)");
  mbu->add_option("--mesh-depth", cfg.mra_mesh_depth, "Depth of the checking mesh")->check(CLI::Range(1, 7));
  mbu->add_option("--tolerance", cfg.mra_tolerance, "Refinement residual tolerance")->check(CLI::PositiveNumber);
  outputs(mbu, false, false, true);

  // tiles
  auto* tiles = app.add_subcommand("tiles", "Wavelet sets and congruence certificates");
  tiles->require_subcommand(1);
  auto verify_opt = [&](CLI::App* c) {
    c->add_option("--verify", cfg.tiles_verify, "Checks to run")
        ->check(CLI::IsMember({"all", "translation", "weyl", "dilation", "none"}));
  };
  auto* tw1 = tiles->add_subcommand("w1", "Truncated three-way wavelet set W1");
  auto* tw2 = tiles->add_subcommand("w2", "Truncated three-way wavelet set W2");
  for (auto* c : {tw1, tw2}) {
    c->add_option("--depth", cfg.tiles_depth, "Truncation depth")->check(CLI::Range(1, 14));
    verify_opt(c);
    outputs(c, false, true, true);
  }
  auto* tsh = tiles->add_subcommand("shannon", "Two-generator check of the Shannon set");
  outputs(tsh, false, false, true);
  auto* tve = tiles->add_subcommand("verify", "Three-way check of a planar set read from JSON");
  tve->add_option("--set", cfg.tiles_set, "Set file (JSON exchange format)")->required();
  tve->add_option("--bound", cfg.tiles_bound, "Residual bound, rational multiple of pi^2");
  verify_opt(tve);
  auto* tco = tiles->add_subcommand("construct", "Exchange construction of a wavelet set");
  tco->add_option("--dim", cfg.construct_dim, "1: 2pi lattice on the line; 2: reflections of the square")
      ->check(CLI::IsMember({1, 2}));
  tco->add_option("--epsilon", cfg.construct_epsilon, "Target residual")->check(CLI::PositiveNumber);
  tco->add_option("--max-iterations", cfg.construct_max_iterations, "Iteration limit")->check(CLI::Range(1, 200));
  tco->add_option("--max-shell", cfg.construct_max_shell, "Largest dilation shell for relocation")
      ->check(CLI::Range(1, 64));
  outputs(tco, false, true, true);
  auto* tin = tiles->add_subcommand("intersection", "Translations shared by the reflection group and 2pi lattice");
  tin->add_option("--member", cfg.vectors, "Translation a,b (units of pi) to test");

  // reflections
  auto* refl = app.add_subcommand("reflections", "Reflection groups and foldable figures");
  refl->require_subcommand(1);
  auto* rkl = refl->add_subcommand("klein", "The Klein four-group of the A1 x A1 root system");
  auto* rte = refl->add_subcommand("tessellate", "Cells of a figure's reflection group in a square region");
  rte->add_option("--figure", cfg.tess_figure, "Figure")
      ->check(CLI::IsMember({"unit-square", "right-triangle", "triangle-cell"}));
  rte->add_option("--radius", cfg.tess_radius, "Half side of the region")->check(CLI::Range(0.25, 16.0));
  outputs(rte, false, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fex->parsed()) return run_fif_example(cfg);
    if (fba->parsed()) return run_fif_basis(cfg);
    if (sfx->parsed()) return run_surface_fixture(cfg);
    if (sba->parsed()) return run_surface_basis(cfg);
    if (mbu->parsed()) return run_mra_build(cfg);
    if (tw1->parsed()) return run_tiles_fixture(cfg, true);
    if (tw2->parsed()) return run_tiles_fixture(cfg, false);
    if (tsh->parsed()) return run_tiles_shannon(cfg);
    if (tve->parsed()) return run_tiles_verify(cfg);
    if (tco->parsed()) return run_tiles_construct(cfg);
    if (tin->parsed()) return run_tiles_intersection(cfg);
    if (rkl->parsed()) return run_reflections_klein(cfg);
    if (rte->parsed()) return run_reflections_tessellate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

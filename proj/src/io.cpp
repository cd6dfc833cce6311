#include "cwave/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cwave {

namespace {

constexpr double kWidth = 640, kHeight = 400, kMargin = 40;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Data rectangle -> viewport, y up.
struct Viewport {
  double x0, x1, y0, y1;
  double sx(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double sy(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

Viewport padded(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  double py = 0.05 * (y1 - y0);
  return {x0, x1, y0 - py, y1 + py};
}

std::string svg_header(const std::string& title) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  o << "<title>" << xml_escape(title) << "</title>\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
    << "</text>\n";
  return o.str();
}

std::string svg_frame(const Viewport& v, const std::string& unit) {
  std::ostringstream o;
  o << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
    << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  auto label = [&](double x, double y, const std::string& anchor, double value) {
    o << "<text x=\"" << format_svg(x) << "\" y=\"" << format_svg(y) << "\" text-anchor=\"" << anchor
      << "\" font-size=\"10\">" << format_svg(value) << unit << "</text>\n";
  };
  label(kMargin, kHeight - kMargin + 14, "start", v.x0);
  label(kWidth - kMargin, kHeight - kMargin + 14, "end", v.x1);
  label(kMargin - 4, kHeight - kMargin, "end", v.y0);
  label(kMargin - 4, kMargin + 8, "end", v.y1);
  return o.str();
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_svg(double v) {
  char buf[40];
  if (v == 0) v = 0;  // no "-0"
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string graph_csv(const std::vector<std::pair<double, double>>& points) {
  std::string out = "x,y\n";
  for (auto& [x, y] : points) out += format_full(x) + "," + format_full(y) + "\n";
  return out;
}

std::string graphs_csv(const std::vector<std::string>& names,
                       const std::vector<std::vector<std::pair<double, double>>>& graphs) {
  if (names.size() != graphs.size()) throw std::invalid_argument("graphs_csv: names and graphs differ in length");
  std::string out = "x";
  for (auto& n : names) out += "," + n;
  out += "\n";
  if (graphs.empty()) return out;
  for (size_t k = 0; k < graphs[0].size(); ++k) {
    out += format_full(graphs[0][k].first);
    for (auto& g : graphs) {
      if (g.size() != graphs[0].size() || g[k].first != graphs[0][k].first)
        throw std::invalid_argument("graphs_csv: graphs are not sampled on the same abscissae");
      out += "," + format_full(g[k].second);
    }
    out += "\n";
  }
  return out;
}

std::string surface_csv(const std::map<Vec<Rational>, Rational>& vertices) {
  std::string out = "x,y,z\n";
  for (auto& [p, z] : vertices) {
    if (p.dim() != 2) throw std::invalid_argument("surface_csv: planar vertices expected");
    out += format_full(to_double(p[0])) + "," + format_full(to_double(p[1])) + "," + format_full(to_double(z)) + "\n";
  }
  return out;
}

std::string graphs_svg(const std::vector<GraphSeries>& series, const std::string& title) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (auto& s : series)
    for (auto& [x, y] : s.points) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  Viewport v = padded(x0, x1, y0, y1);
  std::string out = svg_header(title) + svg_frame(v, "");
  for (size_t k = 0; k < series.size(); ++k) {
    const char* colour = kPalette[k % std::size(kPalette)];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1\" points=\"";
    bool first = true;
    for (auto& [x, y] : series[k].points) {
      if (!first) out += ' ';
      first = false;
      out += format_svg(v.sx(x)) + "," + format_svg(v.sy(y));
    }
    out += "\"/>\n";
    out += "<text x=\"" + format_svg(kWidth - kMargin - 4) + "\" y=\"" + format_svg(kMargin + 14 + 12 * k) +
           "\" text-anchor=\"end\" font-size=\"10\" fill=\"" + colour + "\">" + xml_escape(series[k].name) +
           "</text>\n";
  }
  return out + "</svg>\n";
}

std::string surface_svg(const std::vector<MeshCell>& mesh, const std::string& title) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  double z0 = x0, z1 = -x0;
  for (auto& c : mesh) {
    for (auto& p : c.points) {
      if (p.dim() != 2) throw std::invalid_argument("surface_svg: planar mesh expected");
      double px = to_double(p[0]), py = to_double(p[1]);
      x0 = std::min(x0, px), x1 = std::max(x1, px), y0 = std::min(y0, py), y1 = std::max(y1, py);
    }
    for (auto& z : c.values) z0 = std::min(z0, to_double(z)), z1 = std::max(z1, to_double(z));
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1, z0 = 0, z1 = 1;
  // Equal scales on both axes.
  double span = std::max(x1 - x0, y1 - y0);
  Viewport v{x0, x0 + span * (kWidth - 2 * kMargin) / (kHeight - 2 * kMargin), y0, y0 + span};
  std::string out = svg_header(title + " (z from " + format_svg(z0) + " to " + format_svg(z1) + ")");
  for (auto& c : mesh) {
    double mean = 0;
    for (auto& z : c.values) mean += to_double(z);
    mean /= std::max<size_t>(1, c.values.size());
    double t = z1 > z0 ? (mean - z0) / (z1 - z0) : 0.5;
    int r = static_cast<int>(std::lround(255 * t)), b = 255 - r;
    out += "<polygon fill=\"rgb(" + std::to_string(r) + ",64," + std::to_string(b) + ")\" stroke=\"none\" points=\"";
    for (size_t k = 0; k < c.points.size(); ++k) {
      if (k) out += ' ';
      out += format_svg(v.sx(to_double(c.points[k][0]))) + "," + format_svg(v.sy(to_double(c.points[k][1])));
    }
    out += "\"/>\n";
  }
  return out + "</svg>\n";
}

std::string box_sets_svg(const std::vector<ShadedSet>& sets, const std::string& title) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::string unit;
  for (auto& s : sets) {
    if (s.set.dim() != 2) throw std::invalid_argument("box_sets_svg: planar sets expected");
    if (s.set.unit_power() == 1) unit = "π";
    for (auto& b : s.set.boxes()) {
      x0 = std::min(x0, to_double(b.lo[0])), x1 = std::max(x1, to_double(b.hi[0]));
      y0 = std::min(y0, to_double(b.lo[1])), y1 = std::max(y1, to_double(b.hi[1]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double span = std::max(x1 - x0, y1 - y0);
  Viewport v{x0, x0 + span * (kWidth - 2 * kMargin) / (kHeight - 2 * kMargin), y0, y0 + span};
  std::string out = svg_header(title) + svg_frame(v, unit);
  for (size_t k = 0; k < sets.size(); ++k) {
    const char* colour = kPalette[k % std::size(kPalette)];
    out += "<g fill=\"" + std::string(colour) + "\" fill-opacity=\"0.6\" stroke=\"black\" stroke-width=\"0.2\">\n";
    for (auto& b : sets[k].set.boxes()) {
      double px = v.sx(to_double(b.lo[0])), py = v.sy(to_double(b.hi[1]));
      double w = v.sx(to_double(b.hi[0])) - px, h = v.sy(to_double(b.lo[1])) - py;
      out += "<rect x=\"" + format_svg(px) + "\" y=\"" + format_svg(py) + "\" width=\"" + format_svg(w) +
             "\" height=\"" + format_svg(h) + "\"/>\n";
    }
    out += "</g>\n";
    out += "<text x=\"" + format_svg(kWidth - 4) + "\" y=\"" + format_svg(kMargin + 14 + 12 * k) +
           "\" text-anchor=\"end\" font-size=\"10\" fill=\"" + colour + "\">" + xml_escape(sets[k].name) +
           "</text>\n";
  }
  return out + "</svg>\n";
}

std::string certificate_json(const CongruenceCertificate& cert) {
  using nlohmann::json;
  auto map_json = [](const AffineMap<Rational>& g) {
    json linear = json::array();
    for (size_t i = 0; i < g.dim(); ++i) {
      json row = json::array();
      for (size_t j = 0; j < g.dim(); ++j) row.push_back(to_string(g.linear()(i, j)));
      linear.push_back(row);
    }
    json shift = json::array();
    for (auto& x : g.shift()) shift.push_back(to_string(x));
    return json{{"linear", linear}, {"shift", shift}};
  };
  json pieces = json::array();
  for (auto& p : cert.pieces)
    pieces.push_back(json{{"set", json::parse(p.piece.to_json())}, {"g", map_json(p.g)}});
  json out{{"kind", to_string(cert.kind)},
           {"pieces", pieces},
           {"residual", json::parse(cert.residual.to_json())},
           {"uncovered", json::parse(cert.uncovered.to_json())},
           {"residual_measure", cert.residual_measure().str()},
           {"uncovered_measure", cert.uncovered_measure().str()},
           {"congruent", cert.congruent()}};
  return out.dump(1) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream o;
  o << f.rdbuf();
  return o.str();
}

}  // namespace cwave

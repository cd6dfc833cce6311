// Exporters: CSV (full double precision), SVG (12 significant digits) and
// small JSON helpers.  Every writer is deterministic: identical inputs give
// byte-identical output.
#pragma once

#include "cwave/boxset.hpp"
#include "cwave/surfaces.hpp"
#include "cwave/tiles.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cwave {

// "%.17g" (round-trips every double) and "%.12g".
std::string format_full(double v);
std::string format_svg(double v);

// CSV with a header line.
std::string graph_csv(const std::vector<std::pair<double, double>>& points);  // x,y
// Several graphs sampled on the same abscissae: x,<name_1>,<name_2>,...
std::string graphs_csv(const std::vector<std::string>& names,
                       const std::vector<std::vector<std::pair<double, double>>>& graphs);
// Distinct mesh vertices: x,y,z (exact values printed as doubles).
std::string surface_csv(const std::map<Vec<Rational>, Rational>& vertices);

struct GraphSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};
// Polylines in a 640x400 viewport with a labelled frame.
std::string graphs_svg(const std::vector<GraphSeries>& series, const std::string& title);

// Filled triangles / polygons shaded by the mean vertex value.
std::string surface_svg(const std::vector<MeshCell>& mesh, const std::string& title);

struct ShadedSet {
  std::string name;
  DyadicBoxSet set;
};
// Planar box sets drawn in their own colours, with the unit (pi or 1) in the
// axis labels.  std::invalid_argument for sets that are not planar.
std::string box_sets_svg(const std::vector<ShadedSet>& sets, const std::string& title);

// Certificate summary as JSON: kind, pieces (set + map), residual, uncovered,
// exact measures.
std::string certificate_json(const CongruenceCertificate& cert);

// Writes text to a file, creating parent directories.  Throws
// std::runtime_error when the file cannot be written.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace cwave

#pragma once

// File formats: edge-list topologies, surface CSVs, JSON exports and the
// binary PPM heatmap.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "robsurf/error.hpp"
#include "robsurf/graph.hpp"
#include "robsurf/linalg.hpp"
#include "robsurf/metrics.hpp"
#include "robsurf/pca.hpp"
#include "robsurf/surface.hpp"

namespace robsurf {

// ---------------------------------------------------------------------------
// Edge lists

// One link per line, "u v" with whitespace-separated labels. Blank lines and
// lines starting with '#' are skipped. Labels get dense indices in
// first-seen order.
inline Graph parse_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeIndex> index;
  std::vector<std::string> labels;
  std::vector<Link> links;
  std::map<Link, std::size_t> seen;  // link -> line of first occurrence

  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.try_emplace(label, static_cast<NodeIndex>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra))
      throw ParseError("expected exactly two node labels, got '" + line + "'", line_no);
    if (a == b) throw ParseError("self-loop at node '" + a + "'", line_no);

    const NodeIndex u = intern(a);
    const NodeIndex v = intern(b);
    const Link l(u, v);
    auto [it, inserted] = seen.try_emplace(l, line_no);
    if (!inserted)
      throw ParseError("duplicate link " + a + " " + b + " (first seen on line " +
                           std::to_string(it->second) + ")",
                       line_no);
    links.push_back(l);
  }
  const std::size_t n = labels.size();
  return Graph(n, std::move(links), std::move(labels));
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline Graph load_edge_list(const std::filesystem::path& path) {
  std::istringstream in(read_file_bytes(path));
  return parse_edge_list(in);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// CSV

// 17 significant digits: parsing the text gives back the same double.
inline std::string format_double(double x) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

// Header "percent,1,..,m", then one row per failure percentage.
inline void write_surface_csv(std::ostream& out, const Matrix& omega,
                              std::span<const int> percentages) {
  if (omega.rows() != percentages.size())
    throw InputError("write_surface_csv: row count differs from percentage count");
  out << "percent";
  for (std::size_t i = 0; i < omega.cols(); ++i) out << ',' << (i + 1);
  out << '\n';
  for (std::size_t p = 0; p < omega.rows(); ++p) {
    out << percentages[p];
    for (double x : omega.row(p)) out << ',' << format_double(x);
    out << '\n';
  }
}

struct SurfaceTable {
  std::vector<int> percentages;
  Matrix omega;
};

inline SurfaceTable read_surface_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    return cells;
  };

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty surface file", 1);
  const auto header = split(line);
  if (header.empty() || header.front() != "percent")
    throw ParseError("surface header must start with 'percent'", 1);
  const std::size_t m = header.size() - 1;

  SurfaceTable table;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != m + 1)
      throw ParseError("expected " + std::to_string(m + 1) + " cells", line_no);
    try {
      table.percentages.push_back(std::stoi(cells[0]));
      std::vector<double> row;
      row.reserve(m);
      for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(std::stod(cells[i]));
      rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", line_no);
    }
  }
  table.omega = rows.empty() ? Matrix(0, m) : Matrix::from_rows(rows);
  return table;
}

// Columns percent,mean,variance,cumulative_area; the last cumulative_area
// equals area_under_mean.
inline void write_summary_csv(std::ostream& out, const SurfaceSummary& s,
                              std::span<const int> percentages) {
  out << "percent,mean,variance,cumulative_area\n";
  double area = 0.0;
  for (std::size_t p = 0; p < percentages.size(); ++p) {
    if (p > 0)
      area += 0.5 * (s.mean_per_p[p] + s.mean_per_p[p - 1]) *
              static_cast<double>(percentages[p] - percentages[p - 1]);
    out << percentages[p] << ',' << format_double(s.mean_per_p[p]) << ','
        << format_double(s.variance_per_p[p]) << ',' << format_double(area) << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON exports

inline nlohmann::json matrix_to_json(const Matrix& a) {
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < a.rows(); ++r)
    rows.push_back(std::vector<double>(a.row(r).begin(), a.row(r).end()));
  return rows;
}

inline nlohmann::json pca_to_json(const PcaModel& model, std::span<const std::string> names) {
  nlohmann::json j;
  j["metric_names"] = std::vector<std::string>(names.begin(), names.end());
  j["t0"] = model.intact;
  j["mean_covariance"] = matrix_to_json(model.mean_covariance);
  j["eigenvalues"] = model.eigenvalues;
  auto columns = nlohmann::json::array();
  for (std::size_t k = 0; k < model.eigenvectors.cols(); ++k)
    columns.push_back(model.eigenvectors.column(k));
  j["eigenvectors"] = columns;  // one array per eigenvector, aligned with eigenvalues
  j["energy"] = model.energy;
  j["alpha"] = model.alpha;
  j["l_selected"] = model.selected_l;
  j["l_used"] = model.used_l;
  j["v"] = model.principal;
  j["v_hat"] = model.normalized;
  j["r_star_init"] = dot(model.normalized, model.intact);
  j["warnings"] = model.warnings;
  return j;
}

// ---------------------------------------------------------------------------
// Heatmap

// Linear blue -> red ramp over [0, scale_max]: value 0 maps to (0,0,255),
// scale_max to (255,0,0). Values are clamped to the scale; an empty or
// all-zero scale renders everything blue.
inline std::array<std::uint8_t, 3> heatmap_color(double value, double scale_max) {
  double t = scale_max > 0.0 ? value / scale_max : 0.0;
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const auto red = static_cast<std::uint8_t>(std::lround(255.0 * t));
  return {red, 0, static_cast<std::uint8_t>(255 - red)};
}

// Binary PPM (P6): one pixel per cell, x = configuration rank, y = failure
// level with the first level on top.
inline std::string encode_ppm(const Matrix& omega, double scale_max) {
  if (omega.empty()) throw InputError("heatmap of an empty surface");
  std::string out = "P6 " + std::to_string(omega.cols()) + " " + std::to_string(omega.rows()) +
                    " 255\n";
  out.reserve(out.size() + 3 * omega.rows() * omega.cols());
  for (double x : omega.data()) {
    const auto rgb = heatmap_color(x, scale_max);
    out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void emit_heatmap(const RobustnessSurface& s, const std::filesystem::path& path) {
  write_file(path, encode_ppm(s.omega, s.scale_max));
}

}  // namespace robsurf

#include "carnotkit/cloud_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace carnotkit {

namespace {

std::string format_17g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void export_cloud(const SemigroupCloud& cloud, std::ostream& out, CloudFormat format) {
  const AlgebraPtr& alg = cloud.algebra;
  if (format == CloudFormat::csv) {
    for (int i = 0; i < alg->dim(); ++i) out << (i ? "," : "") << alg->label(i);
    out << "\n";
    for (const auto& p : cloud.points) {
      for (int i = 0; i < alg->dim(); ++i) out << (i ? "," : "") << format_17g(p.coeffs[i]);
      out << "\n";
    }
    return;
  }
  nlohmann::json doc;
  doc["algebra"] = alg->name();
  doc["nu"] = cloud.nu;
  doc["seed"] = cloud.params.seed;
  doc["params"] = {{"count", cloud.params.count},
                   {"max_pieces", cloud.params.max_pieces},
                   {"magnitude_cap", cloud.params.magnitude_cap}};
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : cloud.points) points.push_back(p.coeffs);
  doc["points"] = std::move(points);
  nlohmann::json controls = nlohmann::json::array();
  for (const auto& control : cloud.generators) {
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& piece : control.pieces)
      pieces.push_back(
          {{"duration", piece.duration}, {"direction", horizontal_coeffs(piece.direction)}});
    controls.push_back(std::move(pieces));
  }
  doc["generated_by"] = std::move(controls);
  out << doc.dump(2) << "\n";
}

void export_cloud_file(const SemigroupCloud& cloud, const std::string& path, CloudFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CarnotError("cannot open '" + path + "' for writing");
  export_cloud(cloud, out, format);
}

std::vector<DblElement> parse_points(const AlgebraPtr& alg, const std::string& content) {
  const int n = alg->dim();
  std::vector<DblElement> points;

  std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw CarnotError("point file is empty");

  if (content[first] == '{') {
    nlohmann::json doc = nlohmann::json::parse(content);
    if (doc.contains("algebra") && doc["algebra"].is_string() &&
        doc["algebra"].get<std::string>() != alg->name())
      throw CarnotError("point file was generated for algebra '" +
                        doc["algebra"].get<std::string>() + "', expected '" + alg->name() + "'");
    if (!doc.contains("points") || !doc["points"].is_array())
      throw CarnotError("JSON point file lacks a 'points' array");
    for (const auto& row : doc["points"]) {
      std::vector<double> coords = row.get<std::vector<double>>();
      if (static_cast<int>(coords.size()) != n)
        throw CarnotError("point has " + std::to_string(coords.size()) +
                          " coordinates, expected " + std::to_string(n));
      points.push_back(make_element(alg, std::move(coords)));
    }
    return points;
  }

  // CSV: header row then decimal rows
  std::istringstream stream(content);
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
      cells.back().pop_back();
    if (static_cast<int>(cells.size()) != n)
      throw CarnotError("line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " fields, expected " + std::to_string(n));
    if (header) {
      header = false;
      continue;  // label row
    }
    std::vector<double> coords(n);
    for (int i = 0; i < n; ++i) {
      try {
        coords[i] = std::stod(cells[i]);
      } catch (...) {
        throw CarnotError("line " + std::to_string(line_no) + ": cannot parse '" + cells[i] +
                          "'");
      }
    }
    points.push_back(make_element(alg, std::move(coords)));
  }
  return points;
}

std::vector<DblElement> load_points(const AlgebraPtr& alg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CarnotError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_points(alg, buffer.str());
}

}  // namespace carnotkit

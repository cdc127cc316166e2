#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "gfrft/graph.hpp"
#include "gfrft/types.hpp"

namespace gfrft {

// Graph file layout:
//   {"n": 4, "edges": [[0, 1, 0.5], ...], "coords": [[x, y], ...]}
// Undirected, each pair listed once, weights finite and positive, no self
// loops; coords is optional and must hold one [x, y] per vertex.
Graph read_graph_json(const std::string& path);
void write_graph_json(const Graph& g, const std::string& path);

// Signal layout: one sample per line, "re" or "re,im", no header. The writer
// always emits both columns with round-trip-exact doubles.
CVector read_signal_csv(const std::string& path);
void write_signal_csv(const CVector& x, const std::string& path);

// Shortest double spelling that parses back to the same bits.
std::string format_double(double v);

// Rectangular results table; every row must match the header width.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

void write_csv(const ResultTable& t, const std::string& path);

nlohmann::json read_json(const std::string& path);
void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace gfrft

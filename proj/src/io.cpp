#include "gfrft/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <utility>

namespace gfrft {
namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

double parse_field(const std::string& text, const std::string& path, size_t line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || *end != '\0') {
    throw IoError(path + ":" + std::to_string(line) + ": malformed number '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Graph read_graph_json(const std::string& path) {
  const nlohmann::json j = read_json(path);
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
      throw IoError(path + ": graph file needs fields 'n' and 'edges'");
    }
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
      throw IoError(path + ": n must be a positive integer");
    }
    const Index n = j["n"].get<Index>();
    Graph g;
    g.n = n;
    g.weights = RMatrix::Zero(n, n);
    std::set<std::pair<Index, Index>> seen;
    if (!j["edges"].is_array()) throw IoError(path + ": edges must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number()) {
        throw IoError(path + ": each edge must be [i, j, w] with integer endpoints");
      }
      const Index a = e[0].get<Index>();
      const Index b = e[1].get<Index>();
      const double w = e[2].get<double>();
      if (a < 0 || a >= n || b < 0 || b >= n) {
        throw IoError(path + ": edge endpoint out of range");
      }
      if (a == b) throw IoError(path + ": self loops are not allowed");
      if (!std::isfinite(w) || w <= 0.0) {
        throw IoError(path + ": edge weights must be finite and positive");
      }
      if (!seen.insert(std::make_pair(std::min(a, b), std::max(a, b))).second) {
        throw IoError(path + ": duplicate edge");
      }
      g.weights(a, b) = w;
      g.weights(b, a) = w;
    }
    if (j.contains("coords") && !j["coords"].is_null()) {
      const auto& c = j["coords"];
      if (!c.is_array() || static_cast<Index>(c.size()) != n) {
        throw IoError(path + ": coords must list one [x, y] per vertex");
      }
      RMatrix xy(n, 2);
      for (Index i = 0; i < n; ++i) {
        const auto& p = c[static_cast<size_t>(i)];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          throw IoError(path + ": coords entries must be [x, y]");
        }
        xy(i, 0) = p[0].get<double>();
        xy(i, 1) = p[1].get<double>();
        if (!std::isfinite(xy(i, 0)) || !std::isfinite(xy(i, 1))) {
          throw IoError(path + ": coords must be finite");
        }
      }
      g.coords = std::move(xy);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": malformed graph file (" + std::string(e.what()) + ")");
  }
}

void write_graph_json(const Graph& g, const std::string& path) {
  nlohmann::json j;
  j["n"] = g.n;
  nlohmann::json edges = nlohmann::json::array();
  for (Index i = 0; i < g.n; ++i) {
    for (Index k = i + 1; k < g.n; ++k) {
      if (g.weights(i, k) != 0.0) {
        edges.push_back(nlohmann::json::array({i, k, g.weights(i, k)}));
      }
    }
  }
  j["edges"] = std::move(edges);
  if (g.coords) {
    nlohmann::json coords = nlohmann::json::array();
    for (Index i = 0; i < g.n; ++i) {
      coords.push_back(nlohmann::json::array({(*g.coords)(i, 0), (*g.coords)(i, 1)}));
    }
    j["coords"] = std::move(coords);
  }
  write_json(j, path);
}

CVector read_signal_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<Complex> values;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const bool blank =
        std::all_of(raw.begin(), raw.end(),
                    [](unsigned char c) { return std::isspace(c) != 0; });
    if (blank) continue;
    const size_t comma = raw.find(',');
    if (comma == std::string::npos) {
      values.emplace_back(parse_field(raw, path, lineno), 0.0);
    } else {
      if (raw.find(',', comma + 1) != std::string::npos) {
        throw IoError(path + ":" + std::to_string(lineno) + ": expected 1 or 2 columns");
      }
      values.emplace_back(parse_field(raw.substr(0, comma), path, lineno),
                          parse_field(raw.substr(comma + 1), path, lineno));
    }
  }
  if (values.empty()) throw IoError(path + ": no samples found");
  CVector x(static_cast<Index>(values.size()));
  for (Index i = 0; i < x.size(); ++i) x(i) = values[static_cast<size_t>(i)];
  return x;
}

void write_signal_csv(const CVector& x, const std::string& path) {
  std::ofstream out = open_out(path);
  for (Index i = 0; i < x.size(); ++i) {
    out << format_double(x(i).real()) << ',' << format_double(x(i).imag()) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void ResultTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw InvalidArgument("ResultTable: row width does not match header");
  }
  rows.push_back(std::move(row));
}

void write_csv(const ResultTable& t, const std::string& path) {
  std::ofstream out = open_out(path);
  const auto emit = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        throw InvalidArgument("write_csv: cell needs quoting, which is not supported: " + c);
      }
      if (i) out << ',';
      out << c;
    }
    out << '\n';
  };
  emit(t.columns);
  for (const auto& r : t.rows) emit(r);
  if (!out) throw IoError("write failed: " + path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path + ": " + std::string(e.what()));
  }
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace gfrft

#pragma once

// Plain-text point files: one point per line, whitespace-separated numbers.
// An optional first comment line names the column roles, e.g.
//
//   # coord coord weight color
//
// Roles: coord (or x), weight, color, flag, attr. Without it every column
// is a coordinate. Other lines starting with '#' are comments.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "netprune/error.hpp"
#include "netprune/geom.hpp"
#include "netprune/sketch.hpp"

namespace netprune {

enum class ColumnRole { Coord, Weight, Color, Flag, Attr };

struct PointFile {
  std::vector<ColumnRole> roles;
  PointSet rows;
  std::vector<PointAttributes> attributes;  // one per row

  bool has(ColumnRole role) const {
    for (auto r : roles) {
      if (r == role) return true;
    }
    return false;
  }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline bool parse_role(std::string_view tok, ColumnRole& role) {
  if (tok == "coord" || tok == "x") {
    role = ColumnRole::Coord;
  } else if (tok == "weight" || tok == "w") {
    role = ColumnRole::Weight;
  } else if (tok == "color") {
    role = ColumnRole::Color;
  } else if (tok == "flag") {
    role = ColumnRole::Flag;
  } else if (tok == "attr") {
    role = ColumnRole::Attr;
  } else {
    return false;
  }
  return true;
}

inline std::string where(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

inline double parse_number(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError(where(line_no) + "not a number: " + std::string(tok));
  if (!std::isfinite(v)) throw InputError(where(line_no) + "non-finite value");
  return v;
}

inline std::uint64_t parse_count(std::string_view tok, std::size_t line_no, const char* what, double lo, double hi) {
  const double v = parse_number(tok, line_no);
  if (v != std::floor(v) || v < lo || v > hi) {
    throw InputError(where(line_no) + what + " out of range: " + std::string(tok));
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace detail

inline PointFile parse_point_file(std::istream& in) {
  PointFile file;
  std::string line;
  std::size_t line_no = 0;
  bool saw_data = false;
  std::vector<double> coords;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.front().front() == '#') {
      if (saw_data || !file.roles.empty()) continue;
      std::vector<ColumnRole> roles;
      std::string_view first = tokens.front().substr(1);
      std::vector<std::string_view> names;
      if (!first.empty()) names.push_back(first);
      names.insert(names.end(), tokens.begin() + 1, tokens.end());
      bool ok = !names.empty();
      for (auto t : names) {
        ColumnRole r;
        if (!detail::parse_role(t, r)) {
          ok = false;
          break;
        }
        roles.push_back(r);
      }
      if (ok) file.roles = std::move(roles);
      continue;
    }
    if (!saw_data) {
      if (file.roles.empty()) file.roles.assign(tokens.size(), ColumnRole::Coord);
      std::size_t dim = 0;
      for (auto r : file.roles) dim += r == ColumnRole::Coord ? 1 : 0;
      if (dim == 0) throw InputError("no coordinate columns");
      file.rows = PointSet(dim);
      saw_data = true;
    }
    if (tokens.size() != file.roles.size()) {
      throw InputError(detail::where(line_no) + "expected " + std::to_string(file.roles.size()) + " columns");
    }
    coords.clear();
    PointAttributes attrs;
    std::uint64_t weight = 1;
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      switch (file.roles[c]) {
        case ColumnRole::Coord:
          coords.push_back(detail::parse_number(tokens[c], line_no));
          break;
        case ColumnRole::Weight:
          weight = detail::parse_count(tokens[c], line_no, "weight", 1.0, 9007199254740992.0);
          break;
        case ColumnRole::Color:
          attrs.color = static_cast<std::uint32_t>(
              detail::parse_count(tokens[c], line_no, "color", 0.0, static_cast<double>(kMaxColors - 1)));
          break;
        case ColumnRole::Flag:
          attrs.flag = detail::parse_count(tokens[c], line_no, "flag", 0.0, 1.0) == 1;
          break;
        case ColumnRole::Attr:
          attrs.values.push_back(detail::parse_number(tokens[c], line_no));
          break;
      }
    }
    // Coarse check against floor overflow in grid keys.
    for (double v : coords) {
      if (std::abs(v) > 1e15) throw InputError(detail::where(line_no) + "coordinate magnitude too large");
    }
    file.rows.push_back(coords, weight);
    file.attributes.push_back(std::move(attrs));
  }
  if (!saw_data) throw InputError("no points in input");
  return file;
}

inline PointFile read_point_file(const std::string& path) {
  if (path == "-") return parse_point_file(std::cin);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_point_file(in);
}

inline std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void write_point_file(std::ostream& out, const PointFile& file) {
  out << '#';
  for (auto r : file.roles) {
    switch (r) {
      case ColumnRole::Coord: out << " coord"; break;
      case ColumnRole::Weight: out << " weight"; break;
      case ColumnRole::Color: out << " color"; break;
      case ColumnRole::Flag: out << " flag"; break;
      case ColumnRole::Attr: out << " attr"; break;
    }
  }
  out << '\n';
  for (std::size_t i = 0; i < file.rows.size(); ++i) {
    std::size_t coord = 0;
    std::size_t attr = 0;
    const auto& a = file.attributes[i];
    for (std::size_t c = 0; c < file.roles.size(); ++c) {
      if (c) out << ' ';
      switch (file.roles[c]) {
        case ColumnRole::Coord: out << format_number(file.rows.point(i)[coord++]); break;
        case ColumnRole::Weight: out << file.rows.weight(i); break;
        case ColumnRole::Color: out << a.color; break;
        case ColumnRole::Flag: out << (a.flag ? 1 : 0); break;
        case ColumnRole::Attr: out << format_number(a.values.at(attr++)); break;
      }
    }
    out << '\n';
  }
}

}  // namespace netprune

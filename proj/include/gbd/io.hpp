#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gbd/skeleton.hpp"

namespace gbd {

/// Parse error with position information.
struct ParseError : Error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string& what)
      : Error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " +
              what),
        line(line_),
        column(column_) {}
};

namespace detail {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;

  bool eof() const { return pos >= text.size(); }
};

inline std::vector<std::pair<int, std::string>> logical_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream is(text);
  std::string raw;
  int ln = 0;
  while (std::getline(is, raw)) {
    ++ln;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    size_t a = raw.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = raw.find_last_not_of(" \t\r");
    out.emplace_back(ln, raw.substr(a, b - a + 1));
  }
  return out;
}

inline long long parse_ll(const std::string& raw, int line, const char* what) {
  size_t a = raw.find_first_not_of(" \t");
  size_t b = raw.find_last_not_of(" \t");
  std::string tok = a == std::string::npos ? "" : raw.substr(a, b - a + 1);
  try {
    size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, 1, std::string("expected integer for ") + what + ", got '" + tok + "'");
  }
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Reads the line-oriented skeleton document. Syntax and id resolution are
/// checked here; the diagram axioms are validate_gbd's job, so documents with
/// non-bijective squares parse fine and fail validation instead.
///
///   gbd v1
///   levels
///     0: 1 2          # cycle lengths at level 0
///   edges
///     0: 0 0 0 <- 1 3 # id: level rcycle rpos <- scycle spos
///   squares
///     0 -> 0
inline GbdSkeleton parse_skeleton(const std::string& text) {
  auto lines = detail::logical_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty document");
  if (lines[0].second != "gbd v1")
    throw ParseError(lines[0].first, 1, "expected header 'gbd v1'");
  enum class Section { None, Levels, Edges, Squares };
  Section sec = Section::None;
  std::map<int, std::vector<long long>> levels;
  struct RawEdge {
    int line;
    int level, rc, sc;
    long long rp, sp;
  };
  std::map<long long, RawEdge> edges;
  std::map<long long, std::pair<long long, int>> squares;  // edge -> (succ, line)
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& [ln, s] = lines[i];
    if (s == "levels") {
      sec = Section::Levels;
      continue;
    }
    if (s == "edges") {
      sec = Section::Edges;
      continue;
    }
    if (s == "squares") {
      sec = Section::Squares;
      continue;
    }
    switch (sec) {
      case Section::None:
        throw ParseError(ln, 1, "content before any section");
      case Section::Levels: {
        size_t colon = s.find(':');
        if (colon == std::string::npos) throw ParseError(ln, 1, "levels entry needs 'n: lengths'");
        int lv = static_cast<int>(detail::parse_ll(s.substr(0, colon), ln, "level"));
        std::vector<long long> lens;
        for (const std::string& tok : detail::split_ws(s.substr(colon + 1)))
          lens.push_back(detail::parse_ll(tok, ln, "cycle length"));
        if (lens.empty()) throw ParseError(ln, 1, "level without cycle lengths");
        if (levels.count(lv)) throw ParseError(ln, 1, "duplicate level " + std::to_string(lv));
        levels[lv] = std::move(lens);
        break;
      }
      case Section::Edges: {
        size_t colon = s.find(':');
        size_t arrow = s.find("<-");
        if (colon == std::string::npos || arrow == std::string::npos)
          throw ParseError(ln, 1, "edge entry needs 'id: level rcycle rpos <- scycle spos'");
        long long id = detail::parse_ll(s.substr(0, colon), ln, "edge id");
        auto left = detail::split_ws(s.substr(colon + 1, arrow - colon - 1));
        auto right = detail::split_ws(s.substr(arrow + 2));
        if (left.size() != 3 || right.size() != 2)
          throw ParseError(ln, 1, "edge entry needs 'id: level rcycle rpos <- scycle spos'");
        if (edges.count(id)) throw ParseError(ln, 1, "duplicate edge id " + std::to_string(id));
        RawEdge e;
        e.line = ln;
        e.level = static_cast<int>(detail::parse_ll(left[0], ln, "edge level"));
        e.rc = static_cast<int>(detail::parse_ll(left[1], ln, "range cycle"));
        e.rp = detail::parse_ll(left[2], ln, "range position");
        e.sc = static_cast<int>(detail::parse_ll(right[0], ln, "source cycle"));
        e.sp = detail::parse_ll(right[1], ln, "source position");
        edges[id] = e;
        break;
      }
      case Section::Squares: {
        size_t arrow = s.find("->");
        if (arrow == std::string::npos) throw ParseError(ln, 1, "square entry needs 'e -> f'");
        long long from = detail::parse_ll(s.substr(0, arrow), ln, "edge id");
        long long to = detail::parse_ll(s.substr(arrow + 2), ln, "successor edge id");
        if (squares.count(from))
          throw ParseError(ln, 1, "duplicate square entry for edge " + std::to_string(from));
        squares[from] = {to, ln};
        break;
      }
    }
  }
  if (levels.empty()) throw ParseError(lines[0].first, 1, "no levels section");
  GbdSkeleton s;
  int expect = 0;
  for (const auto& [lv, lens] : levels) {
    if (lv != expect)
      throw ParseError(1, 1, "levels must be consecutive from 0; missing level " +
                                 std::to_string(expect));
    ++expect;
    s.levels.push_back(lens);
  }
  // edge ids must be dense 0..E-1
  long long next = 0;
  for (const auto& [id, e] : edges) {
    if (id != next)
      throw ParseError(e.line, 1, "edge ids must be dense from 0; unexpected id " +
                                      std::to_string(id));
    ++next;
    s.edges.push_back(BlueEdge{e.level, e.rc, e.rp, e.sc, e.sp});
  }
  s.fsucc.assign(s.edges.size(), -1);
  for (const auto& [from, to_line] : squares) {
    if (from < 0 || from >= static_cast<long long>(s.edges.size()))
      throw ParseError(to_line.second, 1, "square entry names unknown edge " +
                                              std::to_string(from));
    if (to_line.first < 0 || to_line.first >= static_cast<long long>(s.edges.size()))
      throw ParseError(to_line.second, 1, "square successor names unknown edge " +
                                              std::to_string(to_line.first));
    s.fsucc[from] = static_cast<int>(to_line.first);
  }
  for (size_t e = 0; e < s.fsucc.size(); ++e)
    if (s.fsucc[e] < 0)
      throw ParseError(1, 1, "missing square entry for edge " + std::to_string(e));
  try {
    s.finalize();
  } catch (const Error& err) {
    throw ParseError(1, 1, std::string("structural: ") + err.what());
  }
  return s;
}

inline std::string emit_skeleton(const GbdSkeleton& s) {
  std::ostringstream os;
  os << "gbd v1\n";
  os << "levels\n";
  for (int n = 0; n <= s.depth(); ++n) {
    os << "  " << n << ":";
    for (long long l : s.levels[n]) os << " " << l;
    os << "\n";
  }
  os << "edges\n";
  for (size_t e = 0; e < s.edges.size(); ++e) {
    const BlueEdge& b = s.edges[e];
    os << "  " << e << ": " << b.level << " " << b.range_cycle << " " << b.range_pos << " <- "
       << b.source_cycle << " " << b.source_pos << "\n";
  }
  os << "squares\n";
  for (size_t e = 0; e < s.fsucc.size(); ++e) os << "  " << e << " -> " << s.fsucc[e] << "\n";
  return os.str();
}

/// DOT rendering: levels as same-rank clusters, red cycle steps dashed, blue
/// edges solid with multiplicities as labels.
inline std::string to_dot(const GbdSkeleton& s) {
  std::ostringstream os;
  auto name = [](const Vertex& v) {
    std::ostringstream n;
    n << "v" << v.level << "_" << v.cycle << "_" << v.pos;
    return n.str();
  };
  os << "digraph gbd {\n  rankdir=LR;\n  node [shape=point, width=0.12];\n";
  for (int n = 0; n <= s.depth(); ++n) {
    os << "  { rank=same;";
    for (int j = 0; j < s.cycles_at(n); ++j)
      for (long long p = 0; p < s.cycle_length(n, j); ++p) os << " " << name({n, j, p}) << ";";
    os << " }\n";
  }
  os << "  edge [style=dashed, color=red, constraint=false];\n";
  for (int n = 0; n <= s.depth(); ++n)
    for (int j = 0; j < s.cycles_at(n); ++j)
      for (long long p = 0; p < s.cycle_length(n, j); ++p) {
        Vertex v{n, j, p};
        if (s.cycle_length(n, j) == 1)
          os << "  " << name(v) << " -> " << name(v) << ";\n";
        else
          os << "  " << name(v) << " -> " << name(s.red_step(v)) << ";\n";
      }
  os << "  edge [style=solid, color=blue, constraint=true];\n";
  std::map<std::pair<Vertex, Vertex>, int> mult;
  for (const BlueEdge& e : s.edges) mult[{e.source(), e.range()}]++;
  for (const auto& [key, count] : mult) {
    os << "  " << name(key.first) << " -> " << name(key.second);
    if (count > 1) os << " [label=\"" << count << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

/// FNV-1a hash for provenance headers.
inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace gbd

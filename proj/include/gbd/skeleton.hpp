#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbd/common.hpp"

namespace gbd {

/// A vertex of the layered 2-graph: (level, red-cycle index within the level,
/// position on that cycle). All indices 0-based.
struct Vertex {
  int level = 0;
  int cycle = 0;
  long long pos = 0;

  friend bool operator==(const Vertex& a, const Vertex& b) {
    return a.level == b.level && a.cycle == b.cycle && a.pos == b.pos;
  }
  friend bool operator!=(const Vertex& a, const Vertex& b) { return !(a == b); }
  friend bool operator<(const Vertex& a, const Vertex& b) {
    if (a.level != b.level) return a.level < b.level;
    if (a.cycle != b.cycle) return a.cycle < b.cycle;
    return a.pos < b.pos;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "v(" << level << "," << cycle << "," << pos << ")";
    return os.str();
  }
};

struct RedCycle {
  int level = 0;
  int index = 0;
  long long length = 0;
};

/// Blue edge from a vertex at level+1 (source) to a vertex at level (range).
struct BlueEdge {
  int level = 0;  // level of the range vertex; source sits at level+1
  int range_cycle = 0;
  long long range_pos = 0;
  int source_cycle = 0;
  long long source_pos = 0;

  Vertex range() const { return {level, range_cycle, range_pos}; }
  Vertex source() const { return {level + 1, source_cycle, source_pos}; }
};

enum class ViolationKind {
  Structural,         // unresolved indices; axiom checks skipped
  BlueSink,           // vertex above level 0 emits no blue edge
  BlueSource,         // vertex below the top level receives no blue edge
  SquareCoherence,    // successor edge does not follow the red steps
  SquareBijection,    // successor map not a bijection on a bipartite block
  EdgeCountVariation  // in/out edge counts not constant along a cycle
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool structural() const {
    for (const auto& v : violations)
      if (v.kind == ViolationKind::Structural) return true;
    return false;
  }
  std::string summary() const {
    if (ok()) return "valid";
    std::ostringstream os;
    for (const auto& v : violations) os << v.message << "\n";
    return os.str();
  }
};

/// Blue path; edges[0] has its range at the anchor, edges[k+1] hangs off the
/// source of edges[k]. A length-0 path is just its anchor vertex.
struct BluePath {
  Vertex anchor;
  std::vector<int> edges;

  int length() const { return static_cast<int>(edges.size()); }
  friend bool operator==(const BluePath& a, const BluePath& b) {
    return a.anchor == b.anchor && a.edges == b.edges;
  }
  friend bool operator<(const BluePath& a, const BluePath& b) {
    if (a.anchor != b.anchor) return a.anchor < b.anchor;
    return a.edges < b.edges;
  }
};

/// Layered 2-graph skeleton: levels of isolated red cycles, blue edges across
/// adjacent levels, and the square successor permutation on blue edges.
/// Red edges are implicit (each vertex steps to position+1 on its cycle).
/// Immutable once finalised; all queries are const.
class GbdSkeleton {
 public:
  std::vector<std::vector<long long>> levels;  // cycle lengths per level
  std::vector<BlueEdge> edges;                 // edge id = index
  std::vector<int> fsucc;                      // square successor per edge id

  GbdSkeleton() = default;
  GbdSkeleton(std::vector<std::vector<long long>> lv, std::vector<BlueEdge> ed,
              std::vector<int> sq)
      : levels(std::move(lv)), edges(std::move(ed)), fsucc(std::move(sq)) {
    finalize();
  }

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  int cycles_at(int level) const { return static_cast<int>(levels.at(level).size()); }
  long long cycle_length(int level, int cycle) const { return levels.at(level).at(cycle); }

  long long vertices_at(int level) const {
    long long n = 0;
    for (long long l : levels.at(level)) n += l;
    return n;
  }

  Vertex red_step(const Vertex& v, long long k = 1) const {
    long long len = cycle_length(v.level, v.cycle);
    long long p = (v.pos + k) % len;
    if (p < 0) p += len;
    return {v.level, v.cycle, p};
  }

  /// Builds lookup indices and checks that all indices resolve.
  void finalize() {
    require(!levels.empty(), "skeleton needs at least one level");
    for (const auto& lv : levels) {
      require(!lv.empty(), "every level needs at least one cycle");
      for (long long l : lv) require(l >= 1, "cycle length must be positive");
    }
    require(fsucc.size() == edges.size(), "square map must cover every edge");
    by_range_.clear();
    by_source_.clear();
    blocks_.clear();
    for (size_t i = 0; i < edges.size(); ++i) {
      const BlueEdge& e = edges[i];
      require(e.level >= 0 && e.level + 1 <= depth(), "edge level out of range");
      require(e.range_cycle >= 0 && e.range_cycle < cycles_at(e.level), "edge range cycle out of range");
      require(e.source_cycle >= 0 && e.source_cycle < cycles_at(e.level + 1),
              "edge source cycle out of range");
      require(e.range_pos >= 0 && e.range_pos < cycle_length(e.level, e.range_cycle),
              "edge range position out of range");
      require(e.source_pos >= 0 && e.source_pos < cycle_length(e.level + 1, e.source_cycle),
              "edge source position out of range");
      require(fsucc[i] >= 0 && static_cast<size_t>(fsucc[i]) < edges.size(),
              "square successor out of range");
      by_range_[e.range()].push_back(static_cast<int>(i));
      by_source_[e.source()].push_back(static_cast<int>(i));
      blocks_[{e.level, e.range_cycle, e.source_cycle}].push_back(static_cast<int>(i));
    }
    finalized_ = true;
  }

  /// Blue edges whose range is v (they arrive from level v.level+1).
  const std::vector<int>& edges_with_range(const Vertex& v) const {
    auto it = by_range_.find(v);
    return it == by_range_.end() ? empty_ : it->second;
  }

  /// Blue edges whose source is v (they point down to level v.level-1).
  const std::vector<int>& edges_with_source(const Vertex& v) const {
    auto it = by_source_.find(v);
    return it == by_source_.end() ? empty_ : it->second;
  }

  /// Edge ids of the bipartite block: range on cycle (level, j), source on
  /// cycle (level+1, i).
  const std::vector<int>& block(int level, int range_cycle, int source_cycle) const {
    auto it = blocks_.find({level, range_cycle, source_cycle});
    return it == blocks_.end() ? empty_ : it->second;
  }

  std::vector<RedCycle> cycles() const {
    std::vector<RedCycle> out;
    for (int n = 0; n <= depth(); ++n)
      for (int j = 0; j < cycles_at(n); ++j) out.push_back({n, j, cycle_length(n, j)});
    return out;
  }

  /// Drops everything strictly below level new_depth.
  GbdSkeleton truncate(int new_depth) const {
    require(new_depth >= 0 && new_depth <= depth(), "truncation depth out of range");
    GbdSkeleton out;
    out.levels.assign(levels.begin(), levels.begin() + new_depth + 1);
    std::vector<int> remap(edges.size(), -1);
    for (size_t i = 0; i < edges.size(); ++i)
      if (edges[i].level + 1 <= new_depth) {
        remap[i] = static_cast<int>(out.edges.size());
        out.edges.push_back(edges[i]);
      }
    out.fsucc.resize(out.edges.size());
    for (size_t i = 0; i < edges.size(); ++i)
      if (remap[i] >= 0) out.fsucc[remap[i]] = remap[fsucc[i]];
    out.finalize();
    return out;
  }

  bool finalized() const { return finalized_; }

 private:
  bool finalized_ = false;
  std::map<Vertex, std::vector<int>> by_range_;
  std::map<Vertex, std::vector<int>> by_source_;
  std::map<std::tuple<int, int, int>, std::vector<int>> blocks_;
  std::vector<int> empty_;
};

/// Checks the diagram axioms and returns every violation found. An empty
/// report means the skeleton is a valid diagram of its depth.
inline ValidationReport validate_gbd(const GbdSkeleton& s) {
  ValidationReport rep;
  if (!s.finalized()) {
    rep.violations.push_back({ViolationKind::Structural, "skeleton not finalised"});
    return rep;
  }
  // No blue sinks above level 0, no blue sources below the top level.
  for (int n = 0; n <= s.depth(); ++n)
    for (int j = 0; j < s.cycles_at(n); ++j)
      for (long long p = 0; p < s.cycle_length(n, j); ++p) {
        Vertex v{n, j, p};
        if (n >= 1 && s.edges_with_source(v).empty())
          rep.violations.push_back(
              {ViolationKind::BlueSink, "vertex " + v.to_string() + " emits no blue edge"});
        if (n < s.depth() && s.edges_with_range(v).empty())
          rep.violations.push_back(
              {ViolationKind::BlueSource,
               "vertex " + v.to_string() + " receives no blue edge from level " +
                   std::to_string(n + 1)});
      }
  // Squares: coherence with the red steps, and bijectivity per block.
  for (size_t i = 0; i < s.edges.size(); ++i) {
    const BlueEdge& e = s.edges[i];
    const BlueEdge& f = s.edges[s.fsucc[i]];
    if (!(f.range() == s.red_step(e.range()) && f.source() == s.red_step(e.source())))
      rep.violations.push_back({ViolationKind::SquareCoherence,
                                "square successor of edge " + std::to_string(i) + " (edge " +
                                    std::to_string(s.fsucc[i]) + ") does not follow the red steps"});
  }
  for (int n = 0; n < s.depth(); ++n)
    for (int j = 0; j < s.cycles_at(n); ++j)
      for (int i = 0; i < s.cycles_at(n + 1); ++i) {
        const auto& blk = s.block(n, j, i);
        std::vector<int> seen;
        for (int e : blk) seen.push_back(s.fsucc[e]);
        std::sort(seen.begin(), seen.end());
        bool ok = std::adjacent_find(seen.begin(), seen.end()) == seen.end();
        if (ok)
          for (int img : seen) ok = ok && std::binary_search(blk.begin(), blk.end(), img);
        if (!ok && !blk.empty())
          rep.violations.push_back(
              {ViolationKind::SquareBijection, "square map is not a bijection on block level " +
                                                   std::to_string(n) + " cycles (" +
                                                   std::to_string(j) + " <- " + std::to_string(i) +
                                                   ")"});
      }
  // Edge counts constant along each cycle, per block.
  for (int n = 0; n < s.depth(); ++n)
    for (int j = 0; j < s.cycles_at(n); ++j)
      for (int i = 0; i < s.cycles_at(n + 1); ++i) {
        const auto& blk = s.block(n, j, i);
        std::map<long long, long long> in_count, out_count;
        for (long long p = 0; p < s.cycle_length(n, j); ++p) in_count[p] = 0;
        for (long long q = 0; q < s.cycle_length(n + 1, i); ++q) out_count[q] = 0;
        for (int e : blk) {
          in_count[s.edges[e].range_pos]++;
          out_count[s.edges[e].source_pos]++;
        }
        auto constant = [](const std::map<long long, long long>& m, long long& val) {
          val = m.begin()->second;
          for (const auto& kv : m)
            if (kv.second != val) return false;
          return true;
        };
        long long a = 0, b = 0;
        if (!constant(in_count, a))
          rep.violations.push_back({ViolationKind::EdgeCountVariation,
                                    "in-edge count varies along cycle (" + std::to_string(n) + "," +
                                        std::to_string(j) + ") for sources on cycle (" +
                                        std::to_string(n + 1) + "," + std::to_string(i) + ")"});
        if (!constant(out_count, b))
          rep.violations.push_back({ViolationKind::EdgeCountVariation,
                                    "out-edge count varies along cycle (" + std::to_string(n + 1) +
                                        "," + std::to_string(i) + ") for ranges on cycle (" +
                                        std::to_string(n) + "," + std::to_string(j) + ")"});
      }
  return rep;
}

/// k-fold square successor of a blue edge.
inline int factorisation_step(const GbdSkeleton& s, int edge, long long k = 1) {
  require(edge >= 0 && static_cast<size_t>(edge) < s.edges.size(), "edge id out of range");
  int e = edge;
  for (long long t = 0; t < k; ++t) e = s.fsucc[e];
  return e;
}

/// Order of an edge: least k > 0 returning it to itself under the squares.
inline long long order_of_edge(const GbdSkeleton& s, int edge) {
  int e = s.fsucc.at(edge);
  long long k = 1;
  while (e != edge) {
    e = s.fsucc[e];
    ++k;
  }
  return k;
}

inline BluePath apply_factorisation(const GbdSkeleton& s, const BluePath& p, long long k = 1) {
  BluePath out;
  long long len = s.cycle_length(p.anchor.level, p.anchor.cycle);
  out.anchor = s.red_step(p.anchor, k % len);
  out.edges.reserve(p.edges.size());
  for (int e : p.edges) out.edges.push_back(factorisation_step(s, e, k));
  return out;
}

/// Order of a whole path: lcm of its edge orders. (The edgewise action of the
/// squares makes a path return exactly when every edge has returned.) A
/// length-0 path is carried around its red cycle, so its order is the cycle
/// length.
inline Int order_of_path(const GbdSkeleton& s, const BluePath& p) {
  if (p.edges.empty()) return Int(s.cycle_length(p.anchor.level, p.anchor.cycle));
  Int o = 1;
  for (int e : p.edges) o = int_lcm(o, Int(order_of_edge(s, e)));
  return o;
}

inline Vertex path_source(const GbdSkeleton& s, const BluePath& p) {
  if (p.edges.empty()) return p.anchor;
  return s.edges[p.edges.back()].source();
}

inline bool path_composable(const GbdSkeleton& s, const BluePath& p) {
  Vertex at = p.anchor;
  for (int e : p.edges) {
    if (!(s.edges[e].range() == at)) return false;
    at = s.edges[e].source();
  }
  return true;
}

/// All blue paths anchored (range) at from_level whose source lies on the
/// given cycle. Deterministic order: anchor vertex, then edge ids
/// lexicographically.
inline std::vector<BluePath> enumerate_blue_paths(const GbdSkeleton& s, int from_level,
                                                  int to_level, int to_cycle) {
  require(from_level >= 0 && to_level <= s.depth(), "level beyond truncation depth");
  require(from_level <= to_level, "anchor level must not exceed target level");
  require(to_cycle >= 0 && to_cycle < s.cycles_at(to_level), "target cycle out of range");
  std::vector<BluePath> out;
  std::vector<int> stack;
  auto dfs = [&](auto&& self, const Vertex& at) -> void {
    if (at.level == to_level) {
      if (at.cycle == to_cycle) {
        BluePath p;
        p.anchor = {from_level, 0, 0};
        p.edges = stack;
        if (!stack.empty()) p.anchor = s.edges[stack.front()].range();
        out.push_back(std::move(p));
      }
      return;
    }
    // edges_with_range lists ids in increasing order by construction
    for (int e : s.edges_with_range(at)) {
      stack.push_back(e);
      self(self, s.edges[e].source());
      stack.pop_back();
    }
  };
  for (int j = 0; j < s.cycles_at(from_level); ++j)
    for (long long p = 0; p < s.cycle_length(from_level, j); ++p) {
      Vertex v{from_level, j, p};
      if (from_level == to_level) {
        if (j == to_cycle) out.push_back(BluePath{v, {}});
      } else {
        dfs(dfs, v);
      }
    }
  return out;
}

}  // namespace gbd

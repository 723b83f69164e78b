#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbd/matrix.hpp"
#include "gbd/skeleton.hpp"

namespace gbd {

/// Incidence data of a diagram: cycles per level, the per-vertex in-edge
/// matrices A_n, the per-vertex out-edge matrices B_n, and the diagonal
/// cycle-length matrices T_n, tied together by A_n T_n = T_{n+1} B_n.
struct LevelData {
  std::vector<int> c;       // cycles per level, size L+1
  std::vector<IntMat> A;    // size L, A[n] is c[n+1] x c[n]
  std::vector<IntMat> B;    // size L
  std::vector<IntMat> T;    // size L+1, diagonal

  int depth() const { return static_cast<int>(c.size()) - 1; }

  Int t_entry(int level, int j) const { return T.at(level)(j, j); }
};

struct CompatibilityIssue {
  std::string message;
};

struct CompatibilityReport {
  std::vector<CompatibilityIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const {
    if (ok()) return "compatible";
    std::ostringstream os;
    for (const auto& i : issues) os << i.message << "\n";
    return os.str();
  }
};

/// Verifies shapes, properness, matching zero patterns of A and B, and the
/// exchange identity A_n T_n = T_{n+1} B_n at every level.
inline CompatibilityReport check_compatibility(const LevelData& d) {
  CompatibilityReport rep;
  auto issue = [&](const std::string& m) { rep.issues.push_back({m}); };
  int L = d.depth();
  if (L < 0) {
    issue("no levels");
    return rep;
  }
  if (static_cast<int>(d.A.size()) != L || static_cast<int>(d.B.size()) != L ||
      static_cast<int>(d.T.size()) != L + 1) {
    issue("sequence lengths inconsistent with level count");
    return rep;
  }
  for (int n = 0; n <= L; ++n) {
    if (d.T[n].rows() != d.c[n] || d.T[n].cols() != d.c[n]) {
      issue("T_" + std::to_string(n) + " has wrong shape");
      return rep;
    }
    for (int i = 0; i < d.c[n]; ++i)
      for (int j = 0; j < d.c[n]; ++j) {
        if (i != j && d.T[n](i, j) != 0) issue("T_" + std::to_string(n) + " not diagonal");
        if (i == j && d.T[n](i, j) <= 0)
          issue("T_" + std::to_string(n) + " diagonal entry " + std::to_string(j) +
                " not positive");
      }
  }
  for (int n = 0; n < L; ++n) {
    const IntMat& A = d.A[n];
    const IntMat& B = d.B[n];
    if (A.rows() != d.c[n + 1] || A.cols() != d.c[n] || B.rows() != d.c[n + 1] ||
        B.cols() != d.c[n]) {
      issue("A_" + std::to_string(n) + "/B_" + std::to_string(n) + " have wrong shape");
      return rep;
    }
    if (!A.proper()) issue("A_" + std::to_string(n) + " is not proper");
    if (!B.proper()) issue("B_" + std::to_string(n) + " is not proper");
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j)
        if ((A(i, j) == 0) != (B(i, j) == 0))
          issue("zero patterns of A_" + std::to_string(n) + " and B_" + std::to_string(n) +
                " differ at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    if (A * d.T[n] != d.T[n + 1] * B)
      issue("A_" + std::to_string(n) + " T_" + std::to_string(n) + " != T_" +
            std::to_string(n + 1) + " B_" + std::to_string(n) + " (violation at level " +
            std::to_string(n) + ")");
  }
  return rep;
}

/// Reads the data off a validated skeleton by counting edges; throws with a
/// witness if some count is not constant along a cycle.
inline LevelData extract_data(const GbdSkeleton& s, int up_to_level = -1) {
  int L = up_to_level < 0 ? s.depth() : up_to_level;
  require(L <= s.depth(), "requested level beyond skeleton depth");
  LevelData d;
  for (int n = 0; n <= L; ++n) {
    d.c.push_back(s.cycles_at(n));
    std::vector<Int> diag;
    for (int j = 0; j < s.cycles_at(n); ++j) diag.emplace_back(s.cycle_length(n, j));
    d.T.push_back(IntMat::diagonal(diag));
  }
  for (int n = 0; n < L; ++n) {
    IntMat A(d.c[n + 1], d.c[n]), B(d.c[n + 1], d.c[n]);
    for (int j = 0; j < d.c[n]; ++j)
      for (int i = 0; i < d.c[n + 1]; ++i) {
        const auto& blk = s.block(n, j, i);
        std::map<long long, long long> in_count, out_count;
        for (int e : blk) {
          in_count[s.edges[e].range_pos]++;
          out_count[s.edges[e].source_pos]++;
        }
        long long a = blk.empty() ? 0 : in_count.begin()->second;
        long long b = blk.empty() ? 0 : out_count.begin()->second;
        for (const auto& kv : in_count)
          require(kv.second == a, "edge count not constant along cycle (" + std::to_string(n) +
                                      "," + std::to_string(j) + "): positions " +
                                      std::to_string(in_count.begin()->first) + " and " +
                                      std::to_string(kv.first) + " differ");
        for (const auto& kv : out_count)
          require(kv.second == b, "edge count not constant along cycle (" + std::to_string(n + 1) +
                                      "," + std::to_string(i) + "): positions " +
                                      std::to_string(out_count.begin()->first) + " and " +
                                      std::to_string(kv.first) + " differ");
        if (!blk.empty() &&
            (in_count.size() != static_cast<size_t>(s.cycle_length(n, j)) ||
             out_count.size() != static_cast<size_t>(s.cycle_length(n + 1, i))))
          throw Error("edge count not constant along cycle: some vertex of block (" +
                      std::to_string(n) + "," + std::to_string(j) + ")<-(" + std::to_string(n + 1) +
                      "," + std::to_string(i) + ") has no edge");
        A(i, j) = a;
        B(i, j) = b;
      }
    d.A.push_back(std::move(A));
    d.B.push_back(std::move(B));
  }
  return d;
}

/// Product A_{hi-1} ... A_{lo} (identity when hi == lo).
inline IntMat product_range(const std::vector<IntMat>& mats, int lo, int hi, int lo_dim) {
  IntMat p = IntMat::identity(lo_dim);
  for (int n = lo; n < hi; ++n) p = mats[n] * p;
  return p;
}

struct Telescope {
  LevelData base;
  std::vector<int> indices;  // strictly increasing, indices[0] is the new level 0
};

/// Collapses the data to the given level subsequence; the new maps are the
/// products over each window. The exchange identity is re-checked on the
/// result.
inline LevelData telescope(const LevelData& d, const std::vector<int>& indices) {
  require(!indices.empty(), "telescope needs at least one index");
  for (size_t k = 0; k + 1 < indices.size(); ++k)
    require(indices[k] < indices[k + 1], "telescope indices must be strictly increasing");
  require(indices.front() >= 0 && indices.back() <= d.depth(), "telescope index out of range");
  LevelData out;
  for (int ix : indices) {
    out.c.push_back(d.c[ix]);
    out.T.push_back(d.T[ix]);
  }
  for (size_t k = 0; k + 1 < indices.size(); ++k) {
    out.A.push_back(product_range(d.A, indices[k], indices[k + 1], d.c[indices[k]]));
    out.B.push_back(product_range(d.B, indices[k], indices[k + 1], d.c[indices[k]]));
  }
  internal_check(check_compatibility(out).ok(), "telescoped data lost compatibility");
  return out;
}

struct LpfSubsequenceResult {
  bool found = false;
  std::vector<int> indices;  // completed windows (k-th window has entries >= k+1)
  int horizon = 0;           // scan bound that was used
  std::string detail;
};

/// Greedy search for a level subsequence along which every telescoped entry
/// of the k-th window is at least k+1. Scans forward from the current level,
/// taking the first qualifying window each time, until the horizon runs out.
/// Counts as found when at least min_windows windows complete; data whose
/// products stop growing (identity maps, say) stall on an early threshold and
/// come back as a typed not-found verdict.
inline LpfSubsequenceResult find_lpf_subsequence(const LevelData& d, int horizon = 64,
                                                 int min_windows = 2) {
  LpfSubsequenceResult res;
  res.horizon = horizon;
  int limit = std::min(horizon, d.depth());
  std::vector<int> idx{0};
  Int need = 1;
  while (true) {
    int cur = idx.back();
    IntMat p = IntMat::identity(d.c[cur]);
    int next = -1;
    for (int m = cur + 1; m <= limit; ++m) {
      p = d.A[m - 1] * p;
      if (p.entrywise_at_least(need)) {
        next = m;
        break;
      }
    }
    if (next < 0) {
      if (static_cast<int>(idx.size()) - 1 >= min_windows) {
        res.found = true;
        res.indices = idx;
        res.detail = std::to_string(idx.size() - 1) + " windows within horizon " +
                     std::to_string(limit) + "; window with entries >= " + need.str() +
                     " is the first not completed";
      } else {
        res.detail = "stalled at window threshold " + need.str() + " within horizon " +
                     std::to_string(limit);
      }
      return res;
    }
    idx.push_back(next);
    ++need;
  }
}

}  // namespace gbd

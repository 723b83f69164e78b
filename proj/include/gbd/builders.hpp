#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gbd/leveldata.hpp"
#include "gbd/permsystem.hpp"
#include "gbd/skeleton.hpp"

namespace gbd {

/// Formal product of primes given by a concrete realisation sequence; each
/// prime may repeat. Truncated on demand.
struct SupernaturalNumber {
  std::vector<long long> realisation;

  static bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

  void validate() const {
    for (long long p : realisation)
      require(is_prime(p), "realisation entry " + std::to_string(p) + " is not prime");
  }

  std::map<long long, long long> exponents() const {
    std::map<long long, long long> e;
    for (long long p : realisation) e[p]++;
    return e;
  }
};

struct ContinuedFraction {
  std::vector<long long> terms;  // partial quotients, all >= 1

  void validate() const {
    require(!terms.empty(), "continued fraction needs at least one term");
    for (long long t : terms) require(t >= 1, "continued fraction terms must be >= 1");
  }

  /// Term for a given (0-based) index, repeating the last term past the end.
  long long term(size_t i) const { return i < terms.size() ? terms[i] : terms.back(); }
};

namespace detail {

/// Lays down the edges of one bipartite block so that every edge has maximal
/// order a*v. Edges live at position pairs (x, y) with x = y mod gcd(v, w);
/// those pairs form a single diagonal orbit of length lcm(v, w), which is
/// lifted through gcd(a, b) parallel copies into one orbit of length a*v.
inline void build_block(int level, int range_cycle, int source_cycle, long long a, long long b,
                        long long v, long long w, std::vector<BlueEdge>& edges,
                        std::vector<int>& fsucc) {
  long long d1 = ll_gcd(a, b);
  long long d2 = ll_gcd(v, w);
  std::map<std::pair<long long, long long>, int> first_copy_id;  // (x, y) -> id of copy 0
  for (long long x = 0; x < v; ++x)
    for (long long y = x % d2; y < w; y += d2) {
      first_copy_id[{x, y}] = static_cast<int>(edges.size());
      for (long long c = 0; c < d1; ++c)
        edges.push_back(BlueEdge{level, range_cycle, x, source_cycle, y});
    }
  fsucc.resize(edges.size(), -1);
  for (const auto& [xy, id0] : first_copy_id) {
    auto [x, y] = xy;
    long long xn = (x + 1) % v, yn = (y + 1) % w;
    bool wrap = (xn == 0 && yn == 0);  // the diagonal orbit re-enters its base point
    int target0 = first_copy_id.at({xn, yn});
    for (long long c = 0; c < d1; ++c) {
      long long cn = wrap ? (c + 1) % d1 : c;
      fsucc[id0 + c] = target0 + static_cast<int>(cn);
    }
  }
}

}  // namespace detail

/// Realises compatible data as a skeleton in which every blue edge has the
/// maximal order A_n(i,j) * |V_{n,j}|. Deterministic: per block, the common
/// factor of (a, b) splits off first, then the common factor of (v, w), then
/// the coprime base case forces a complete bipartite picture (handled in one
/// positional formula in build_block).
inline GbdSkeleton build_from_data(const LevelData& d) {
  CompatibilityReport rep = check_compatibility(d);
  require(rep.ok(), "incompatible data: " + rep.summary());
  GbdSkeleton s;
  for (int n = 0; n <= d.depth(); ++n) {
    std::vector<long long> lens;
    for (int j = 0; j < d.c[n]; ++j)
      lens.push_back(checked_ll(d.t_entry(n, j), "cycle length"));
    s.levels.push_back(std::move(lens));
  }
  for (int n = 0; n < d.depth(); ++n)
    for (int j = 0; j < d.c[n]; ++j)
      for (int i = 0; i < d.c[n + 1]; ++i) {
        long long a = checked_ll(d.A[n](i, j), "multiplicity");
        if (a == 0) continue;
        long long b = checked_ll(d.B[n](i, j), "multiplicity");
        long long v = s.levels[n][j];
        long long w = s.levels[n + 1][i];
        internal_check(a * v == b * w, "data compatibility lost");
        detail::build_block(n, j, i, a, b, v, w, s.edges, s.fsucc);
      }
  s.finalize();
  return s;
}

/// One cycle per level, of length a_1 a_2 ... a_n; each deeper vertex emits a
/// single blue edge.
inline GbdSkeleton build_bunce_deddens(const SupernaturalNumber& m, int levels) {
  m.validate();
  require(levels >= 0, "levels must be nonnegative");
  require(static_cast<int>(m.realisation.size()) >= levels,
          "realisation sequence shorter than requested levels");
  LevelData d;
  Int len = 1;
  d.c.assign(levels + 1, 1);
  d.T.push_back(IntMat::diagonal({len}));
  for (int n = 0; n < levels; ++n) {
    long long a = m.realisation[n];
    d.A.push_back(IntMat{{a}});
    d.B.push_back(IntMat{{1}});
    len *= a;
    d.T.push_back(IntMat::diagonal({len}));
  }
  return build_from_data(d);
}

/// Base (untelescoped) data of the rotation-algebra family: two length-1
/// cycles per level and maps [[a_n, 1], [1, 0]].
inline LevelData irrational_rotation_data(const ContinuedFraction& cf, int levels) {
  cf.validate();
  LevelData d;
  d.c.assign(levels + 1, 2);
  for (int n = 0; n <= levels; ++n) d.T.push_back(IntMat::identity(2));
  for (int n = 0; n < levels; ++n) {
    IntMat a{{cf.term(n), 1}, {1, 0}};
    d.A.push_back(a);
    d.B.push_back(a);
  }
  return d;
}

/// 0-based triangular telescope points 0, 2, 5, 9, ...: window k spans k+2
/// consecutive base levels.
inline std::vector<int> triangular_indices(int windows) {
  std::vector<int> ix;
  for (int k = 0; k <= windows; ++k) ix.push_back((k + 1) * (k + 2) / 2 - 1);
  return ix;
}

/// Builds the rotation-family skeleton: base data telescoped over triangular
/// windows (entries of the window products grow without bound), then realised
/// with maximal orders.
inline std::pair<GbdSkeleton, Telescope> build_irrational_rotation(const ContinuedFraction& cf,
                                                                   int levels) {
  require(levels >= 1, "levels must be >= 1");
  std::vector<int> ix = triangular_indices(levels);
  LevelData base = irrational_rotation_data(cf, ix.back());
  LevelData tel = telescope(base, ix);
  GbdSkeleton s = build_from_data(tel);
  return {std::move(s), Telescope{std::move(base), std::move(ix)}};
}

/// Realises a permutation system as a skeleton with all red cycles of length
/// one: block (i, j) gets edges e(0..m-1) and squares read
/// loop_n,j . e(sigma(l)) = e(l) . loop_n+1,i, so the square successor acts as
/// sigma^{-1} on labels and the induced corner inclusions recover psi_sigma.
inline GbdSkeleton build_from_permutations(const PermutationSystem& sys) {
  sys.validate();
  GbdSkeleton s;
  for (int n = 0; n <= sys.depth(); ++n)
    s.levels.push_back(std::vector<long long>(sys.summands(n), 1));
  for (int n = 0; n < sys.depth(); ++n) {
    // deterministic block order: by (source, target)
    std::vector<PermBlock> ordered = sys.blocks[n];
    std::sort(ordered.begin(), ordered.end(), [](const PermBlock& a, const PermBlock& b) {
      return std::tie(a.source, a.target) < std::tie(b.source, b.target);
    });
    for (const auto& b : ordered) {
      int base = static_cast<int>(s.edges.size());
      int m = b.sigma.size();
      for (int l = 0; l < m; ++l) s.edges.push_back(BlueEdge{n, b.source, 0, b.target, 0});
      Perm inv = b.sigma.inverse();
      s.fsucc.resize(s.edges.size());
      for (int l = 0; l < m; ++l) s.fsucc[base + l] = base + inv(l);
    }
  }
  s.finalize();
  return s;
}

/// Reads a length-1-cycle skeleton back as a permutation system: sizes are
/// the anchored path counts and the block permutations invert the square
/// successor on edge labels.
inline PermutationSystem permutation_system_from_skeleton(const GbdSkeleton& s) {
  for (int n = 0; n <= s.depth(); ++n)
    for (int j = 0; j < s.cycles_at(n); ++j)
      require(s.cycle_length(n, j) == 1, "system extraction needs all red cycles of length 1");
  PermutationSystem sys;
  // path counts x_{n+1} = A_n x_n from x_0 = (1, .., 1)
  std::vector<Int> x(s.cycles_at(0), 1);
  sys.sizes.push_back(x);
  sys.blocks.resize(s.depth());
  for (int n = 0; n < s.depth(); ++n) {
    std::vector<Int> nx(s.cycles_at(n + 1), 0);
    for (int j = 0; j < s.cycles_at(n); ++j)
      for (int i = 0; i < s.cycles_at(n + 1); ++i) {
        const auto& blk = s.block(n, j, i);
        if (blk.empty()) continue;
        nx[i] += Int(blk.size()) * x[j];
        std::map<int, int> label;  // edge id -> label within block
        for (size_t l = 0; l < blk.size(); ++l) label[blk[l]] = static_cast<int>(l);
        Perm fperm;
        fperm.image.resize(blk.size());
        for (size_t l = 0; l < blk.size(); ++l) fperm.image[l] = label.at(s.fsucc[blk[l]]);
        PermBlock pb;
        pb.target = i;
        pb.source = j;
        pb.sigma = fperm.inverse();
        sys.blocks[n].push_back(std::move(pb));
      }
    x = nx;
    sys.sizes.push_back(x);
  }
  sys.validate();
  return sys;
}

}  // namespace gbd

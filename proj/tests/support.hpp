#pragma once

// Shared fixtures, random generators and independent oracles for the test
// suites. Everything here is test-only and must stay independent of the
// library code paths it checks (orders via whole-object iteration, counts via
// direct enumeration, and so on).

#include <map>
#include <set>
#include <vector>

#include "gbd/builders.hpp"
#include "gbd/leveldata.hpp"
#include "gbd/prng.hpp"
#include "gbd/skeleton.hpp"

namespace testsupport {

using namespace gbd;

/// Cycle lengths 1, 2, 4, 8, ... (the dyadic tower fixture).
inline GbdSkeleton dyadic_fixture(int levels = 3) {
  return build_bunce_deddens(SupernaturalNumber{std::vector<long long>(levels, 2)}, levels);
}

/// Golden-ratio rotation fixture: all continued-fraction terms 1.
inline std::pair<GbdSkeleton, Telescope> golden_fixture(int windows = 3) {
  return build_irrational_rotation(ContinuedFraction{{1}}, windows);
}

struct RandomGbdOptions {
  int max_levels = 4;      // number of edge levels (depth)
  int max_cycles = 3;      // cycles per level
  long long max_len = 4;   // cycle lengths
  long long max_mult = 3;  // target bound for per-vertex edge counts
  bool length_one_only = false;
};

/// A valid random diagram, NOT built through build_from_data: edges are laid
/// down per diagonal orbit class of each bipartite block (the only placements
/// a square bijection can exist over), and the square map threads random copy
/// permutations through each step. Orders are generic, not maximal.
inline GbdSkeleton random_gbd(Rng& rng, const RandomGbdOptions& opt = {}) {
  GbdSkeleton s;
  int depth = static_cast<int>(rng.uniform(1, opt.max_levels));
  for (int n = 0; n <= depth; ++n) {
    int c = static_cast<int>(rng.uniform(1, opt.max_cycles));
    std::vector<long long> lens;
    for (int j = 0; j < c; ++j)
      lens.push_back(opt.length_one_only ? 1 : rng.uniform(1, opt.max_len));
    s.levels.push_back(std::move(lens));
  }
  for (int n = 0; n < depth; ++n) {
    int cj = static_cast<int>(s.levels[n].size());
    int ci = static_cast<int>(s.levels[n + 1].size());
    // nonzero pattern covering every row and column
    std::vector<std::vector<bool>> nz(ci, std::vector<bool>(cj, false));
    for (int i = 0; i < ci; ++i) nz[i][static_cast<int>(rng.uniform(0, cj - 1))] = true;
    for (int j = 0; j < cj; ++j) nz[static_cast<int>(rng.uniform(0, ci - 1))][j] = true;
    for (int i = 0; i < ci; ++i)
      for (int j = 0; j < cj; ++j)
        if (!nz[i][j] && rng.uniform(0, 3) == 0) nz[i][j] = true;
    for (int j = 0; j < cj; ++j)
      for (int i = 0; i < ci; ++i) {
        if (!nz[i][j]) continue;
        long long v = s.levels[n][j];
        long long w = s.levels[n + 1][i];
        long long g = ll_gcd(v, w);
        long long lcm = v / g * w;
        // orbit-class multiplicities; per-vertex in-count is (w/g) * total,
        // kept at or under max_mult whenever the block geometry allows
        long long smax = std::max<long long>(1, opt.max_mult * g / w);
        long long total = rng.uniform(1, smax);
        std::vector<long long> mult(g, 0);
        for (long long t = 0; t < total; ++t) mult[static_cast<size_t>(rng.uniform(0, g - 1))]++;
        for (long long d = 0; d < g; ++d) {
          if (mult[d] == 0) continue;
          long long m = mult[d];
          // orbit positions t: (x, y) = ((d + t) mod v, t mod w)
          int base = static_cast<int>(s.edges.size());
          for (long long t = 0; t < lcm; ++t)
            for (long long c = 0; c < m; ++c)
              s.edges.push_back(BlueEdge{n, j, (d + t) % v, i, t % w});
          s.fsucc.resize(s.edges.size());
          for (long long t = 0; t < lcm; ++t) {
            std::vector<int> rho = rng.permutation(static_cast<int>(m));
            for (long long c = 0; c < m; ++c)
              s.fsucc[base + t * m + c] =
                  base + ((t + 1) % lcm) * m + rho[static_cast<size_t>(c)];
          }
        }
      }
  }
  s.finalize();
  return s;
}

struct RandomDataOptions {
  int max_levels = 4;
  int max_cycles = 3;
  long long max_len = 4;
  long long max_entry = 5;
};

/// Random compatible data: per block, the edge total is a multiple of
/// lcm(v, w), which makes both A = total/v and B = total/w integers.
inline LevelData random_compatible_data(Rng& rng, const RandomDataOptions& opt = {}) {
  LevelData d;
  int depth = static_cast<int>(rng.uniform(1, opt.max_levels));
  for (int n = 0; n <= depth; ++n) {
    int c = static_cast<int>(rng.uniform(1, opt.max_cycles));
    d.c.push_back(c);
    std::vector<Int> diag;
    for (int j = 0; j < c; ++j) diag.emplace_back(rng.uniform(1, opt.max_len));
    d.T.push_back(IntMat::diagonal(diag));
  }
  for (int n = 0; n < depth; ++n) {
    int cj = d.c[n], ci = d.c[n + 1];
    IntMat A(ci, cj), B(ci, cj);
    std::vector<std::vector<bool>> nz(ci, std::vector<bool>(cj, false));
    for (int i = 0; i < ci; ++i) nz[i][static_cast<int>(rng.uniform(0, cj - 1))] = true;
    for (int j = 0; j < cj; ++j) nz[static_cast<int>(rng.uniform(0, ci - 1))][j] = true;
    for (int i = 0; i < ci; ++i)
      for (int j = 0; j < cj; ++j)
        if (!nz[i][j] && rng.uniform(0, 2) == 0) nz[i][j] = true;
    for (int i = 0; i < ci; ++i)
      for (int j = 0; j < cj; ++j) {
        if (!nz[i][j]) continue;
        long long v = checked_ll(d.t_entry(n, j), "len");
        long long w = checked_ll(d.t_entry(n + 1, i), "len");
        long long g = ll_gcd(v, w);
        long long lcm = v / g * w;
        long long classes = rng.uniform(1, std::max<long long>(1, opt.max_entry * v / lcm));
        A(i, j) = classes * (lcm / v);
        B(i, j) = classes * (lcm / w);
      }
    d.A.push_back(std::move(A));
    d.B.push_back(std::move(B));
  }
  internal_check(check_compatibility(d).ok(), "random data generator must emit compatible data");
  return d;
}

/// Oracle: order of a path by iterating the square map on the whole path,
/// ignoring the lcm shortcut the library uses.
inline long long order_by_whole_path_iteration(const GbdSkeleton& s, const BluePath& p,
                                               long long bound = 100000000) {
  BluePath cur = apply_factorisation(s, p, 1);
  long long k = 1;
  while (!(cur == p)) {
    cur = apply_factorisation(s, cur, 1);
    ++k;
    internal_check(k <= bound, "path order iteration exceeded bound");
  }
  return k;
}

/// Random blue path in the truncation, anchored at a random vertex.
inline BluePath random_path(Rng& rng, const GbdSkeleton& s) {
  int from = static_cast<int>(rng.uniform(0, std::max(0, s.depth() - 1)));
  int j = static_cast<int>(rng.uniform(0, s.cycles_at(from) - 1));
  Vertex at{from, j, rng.uniform(0, s.cycle_length(from, j) - 1)};
  BluePath p;
  p.anchor = at;
  int len = static_cast<int>(rng.uniform(1, s.depth() - from));
  for (int t = 0; t < len; ++t) {
    const auto& out = s.edges_with_range(at);
    if (out.empty()) break;
    int e = out[static_cast<size_t>(rng.uniform(0, static_cast<long long>(out.size()) - 1))];
    p.edges.push_back(e);
    at = s.edges[e].source();
  }
  return p;
}

}  // namespace testsupport

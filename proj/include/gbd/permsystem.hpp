#pragma once

#include <map>
#include <numeric>
#include <vector>

#include "gbd/common.hpp"
#include "gbd/matrix.hpp"

namespace gbd {

/// Permutation on {0, .., n-1}; image[l] is sigma(l).
struct Perm {
  std::vector<int> image;

  int size() const { return static_cast<int>(image.size()); }
  int operator()(int l) const { return image.at(l); }

  static Perm identity(int n) {
    Perm p;
    p.image.resize(n);
    std::iota(p.image.begin(), p.image.end(), 0);
    return p;
  }

  /// The n-cycle (0 1 2 ... n-1).
  static Perm cycle(int n) {
    Perm p = identity(n);
    for (int i = 0; i < n; ++i) p.image[i] = (i + 1) % n;
    return p;
  }

  Perm inverse() const {
    Perm inv;
    inv.image.resize(image.size());
    for (int i = 0; i < size(); ++i) inv.image[image[i]] = i;
    return inv;
  }

  bool valid() const {
    std::vector<bool> hit(image.size(), false);
    for (int v : image) {
      if (v < 0 || v >= size() || hit[v]) return false;
      hit[v] = true;
    }
    return true;
  }

  friend bool operator==(const Perm& a, const Perm& b) { return a.image == b.image; }
};

/// Orbit statistics of a permutation: cycle type, largest orbit, and the
/// fraction of points whose orbit size divides N.
struct PermStats {
  Perm sigma;
  std::map<long long, long long> cycle_type;  // orbit length -> number of orbits
  long long kappa = 0;                        // max orbit length

  explicit PermStats(Perm p) : sigma(std::move(p)) {
    internal_check(sigma.valid(), "not a permutation");
    std::vector<bool> seen(sigma.size(), false);
    for (int i = 0; i < sigma.size(); ++i) {
      if (seen[i]) continue;
      long long len = 0;
      int j = i;
      do {
        seen[j] = true;
        j = sigma(j);
        ++len;
      } while (j != i);
      cycle_type[len]++;
      if (len > kappa) kappa = len;
    }
  }
};

inline long long kappa(const Perm& p) { return PermStats(p).kappa; }

/// Fraction of points in orbits of size dividing N.
inline Rat beta(const PermStats& st, long long N) {
  if (st.sigma.size() == 0) return Rat(1);
  Int hits = 0;
  for (const auto& [len, count] : st.cycle_type)
    if (N % len == 0) hits += Int(len) * count;
  return Rat(hits, Int(st.sigma.size()));
}

inline Rat beta(const Perm& p, long long N) { return beta(PermStats(p), N); }

/// One nonzero partial inclusion: summand `source` at a level maps into
/// summand `target` one level up, with multiplicity sigma.size().
struct PermBlock {
  int target = 0;  // summand index at level n+1
  int source = 0;  // summand index at level n
  Perm sigma;
};

/// A tower of direct sums of matrix blocks with permutation-style partial
/// inclusions: per level, summand sizes and the nonzero blocks.
struct PermutationSystem {
  std::vector<std::vector<Int>> sizes;        // sizes[n][t], levels 0..L
  std::vector<std::vector<PermBlock>> blocks; // blocks[n] joins level n to n+1

  int depth() const { return static_cast<int>(sizes.size()) - 1; }
  int summands(int level) const { return static_cast<int>(sizes.at(level).size()); }

  const PermBlock* find_block(int level, int target, int source) const {
    for (const auto& b : blocks.at(level))
      if (b.target == target && b.source == source) return &b;
    return nullptr;
  }

  /// Multiplicity matrix of level n (rows: summands at n+1).
  IntMat multiplicity_matrix(int level) const {
    IntMat m(summands(level + 1), summands(level));
    for (const auto& b : blocks.at(level)) m(b.target, b.source) = b.sigma.size();
    return m;
  }

  /// Every inclusion must be unital: sum over sources of multiplicity times
  /// source size equals the target size, and every summand participates.
  void validate() const {
    require(!sizes.empty(), "empty system");
    for (int n = 0; n <= depth(); ++n)
      for (const Int& sz : sizes[n]) require(sz >= 1, "summand sizes must be positive");
    require(static_cast<int>(blocks.size()) == depth(), "block level count mismatch");
    for (int n = 0; n < depth(); ++n) {
      for (const auto& b : blocks[n]) {
        require(b.source >= 0 && b.source < summands(n), "block source out of range");
        require(b.target >= 0 && b.target < summands(n + 1), "block target out of range");
        require(b.sigma.size() >= 1 && b.sigma.valid(), "block permutation invalid");
      }
      IntMat m = multiplicity_matrix(n);
      require(m.proper(), "system not proper: some summand at level " + std::to_string(n) +
                              "/" + std::to_string(n + 1) + " participates in no block");
      for (int i = 0; i < summands(n + 1); ++i) {
        Int total = 0;
        for (int j = 0; j < summands(n); ++j) total += m(i, j) * sizes[n][j];
        require(total == sizes[n + 1][i],
                "non-unital system: summand " + std::to_string(i) + " at level " +
                    std::to_string(n + 1) + " has size " + sizes[n + 1][i].str() +
                    " but inclusions deliver " + total.str());
      }
    }
  }
};

}  // namespace gbd

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gbd {

/// Deterministic RNG for sampled checks. Draws come straight from mt19937_64
/// (whose output sequence is pinned by the standard) with rejection sampling,
/// so a fixed seed gives byte-identical results on any platform; the
/// distribution adapters from <random> are deliberately not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform integer in [lo, hi].
  long long uniform(long long lo, long long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<long long>(eng_());  // full 64-bit range
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return lo + static_cast<long long>(r % span);
  }

  bool coin() { return uniform(0, 1) == 1; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(uniform(0, static_cast<long long>(v.size()) - 1))];
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[static_cast<int>(uniform(0, i))]);
    return p;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace gbd

#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbd/builders.hpp"
#include "gbd/leveldata.hpp"
#include "gbd/permsystem.hpp"

namespace gbd {

enum class FamilyKind {
  BunceDeddens,       // one cycle per level, lengths multiply up
  IrrationalRotation, // two length-1 cycles, triangular telescope windows
  PermNCycle,         // single summand, sigma_n = (n+1)-cycle
  PermIdentity,       // single summand, identity permutations
  PermConstantCycle,  // single summand, fixed N-cycle every level
  PermExplicit,       // finite permutation system as given
  PeriodicData,       // explicit data continued periodically
  ExplicitData        // finite data, no continuation
};

enum class Growth { Divergent, Bounded, Unknown };

/// Closed-form facts a family descriptor can certify about its infinite
/// diagram. Explicit finite inputs certify nothing.
struct FamilyCertificates {
  Growth min_order = Growth::Unknown;  // inf of edge orders at level n as n grows
  Growth max_order = Growth::Unknown;  // sup of edge orders over all levels
  Int order_bound = 0;                 // valid when max_order == Bounded
  std::optional<bool> cofinal;
  std::string detail;
};

/// A diagram family: finitely presented, deterministically extendable to any
/// depth. Parameter lists continue with their last entry.
struct Family {
  FamilyKind kind = FamilyKind::ExplicitData;
  SupernaturalNumber primes;          // BunceDeddens
  ContinuedFraction terms;            // IrrationalRotation
  long long constant_cycle = 2;       // PermConstantCycle
  long long identity_letters = 2;     // PermIdentity
  PermutationSystem explicit_system;  // PermExplicit
  LevelData explicit_data;            // PeriodicData / ExplicitData
  int period = 1;                     // PeriodicData: trailing levels that repeat

  static Family bunce_deddens(std::vector<long long> primes_) {
    Family f;
    f.kind = FamilyKind::BunceDeddens;
    f.primes.realisation = std::move(primes_);
    f.primes.validate();
    require(!f.primes.realisation.empty(), "need at least one prime");
    return f;
  }

  static Family irrational_rotation(std::vector<long long> terms_) {
    Family f;
    f.kind = FamilyKind::IrrationalRotation;
    f.terms.terms = std::move(terms_);
    f.terms.validate();
    return f;
  }

  static Family perm_ncycle() {
    Family f;
    f.kind = FamilyKind::PermNCycle;
    return f;
  }

  static Family perm_identity(long long letters = 2) {
    Family f;
    f.kind = FamilyKind::PermIdentity;
    require(letters >= 1, "letters must be positive");
    f.identity_letters = letters;
    return f;
  }

  static Family perm_constant_cycle(long long n) {
    Family f;
    f.kind = FamilyKind::PermConstantCycle;
    require(n >= 1, "cycle length must be positive");
    f.constant_cycle = n;
    return f;
  }

  static Family perm_explicit(PermutationSystem sys) {
    sys.validate();
    Family f;
    f.kind = FamilyKind::PermExplicit;
    f.explicit_system = std::move(sys);
    return f;
  }

  static Family periodic_data(LevelData d, int period_) {
    require(check_compatibility(d).ok(), "periodic family base data incompatible");
    require(period_ >= 1 && period_ <= d.depth(), "period out of range");
    Family f;
    f.kind = FamilyKind::PeriodicData;
    f.explicit_data = std::move(d);
    f.period = period_;
    // repeating the trailing window must keep the exchange identity; that
    // pins T to repeat as well
    const LevelData& b = f.explicit_data;
    int L = b.depth();
    require(b.c[L] == b.c[L - period_] && b.T[L] == b.T[L - period_],
            "periodic continuation requires T and c to match across the period");
    return f;
  }

  static Family from_data(LevelData d) {
    require(check_compatibility(d).ok(), "explicit data incompatible");
    Family f;
    f.kind = FamilyKind::ExplicitData;
    f.explicit_data = std::move(d);
    return f;
  }

  bool infinite() const {
    return kind != FamilyKind::ExplicitData && kind != FamilyKind::PermExplicit;
  }

  bool length_one_cycles() const {
    switch (kind) {
      case FamilyKind::BunceDeddens:
        return false;
      case FamilyKind::IrrationalRotation:
      case FamilyKind::PermNCycle:
      case FamilyKind::PermIdentity:
      case FamilyKind::PermConstantCycle:
      case FamilyKind::PermExplicit:
        return true;
      case FamilyKind::PeriodicData:
      case FamilyKind::ExplicitData: {
        for (const IntMat& t : explicit_data.T)
          for (int j = 0; j < t.rows(); ++j)
            if (t(j, j) != 1) return false;
        return true;
      }
    }
    return false;
  }

  std::string name() const {
    std::ostringstream os;
    switch (kind) {
      case FamilyKind::BunceDeddens: {
        os << "bunce-deddens(";
        for (size_t i = 0; i < primes.realisation.size(); ++i)
          os << (i ? "," : "") << primes.realisation[i];
        os << ",...)";
        break;
      }
      case FamilyKind::IrrationalRotation: {
        os << "irrational-rotation(";
        for (size_t i = 0; i < terms.terms.size(); ++i) os << (i ? "," : "") << terms.terms[i];
        os << ",...)";
        break;
      }
      case FamilyKind::PermNCycle:
        os << "perm-ncycle";
        break;
      case FamilyKind::PermIdentity:
        os << "perm-identity(" << identity_letters << ")";
        break;
      case FamilyKind::PermConstantCycle:
        os << "perm-constant-cycle(" << constant_cycle << ")";
        break;
      case FamilyKind::PermExplicit:
        os << "perm-explicit";
        break;
      case FamilyKind::PeriodicData:
        os << "periodic-data(period " << period << ")";
        break;
      case FamilyKind::ExplicitData:
        os << "explicit-data";
        break;
    }
    return os.str();
  }

  long long prime_at(size_t i) const {
    return i < primes.realisation.size() ? primes.realisation[i] : primes.realisation.back();
  }

  /// Permutation system truncation for the permutation-family kinds.
  PermutationSystem system(int levels) const {
    PermutationSystem sys;
    auto single_summand = [&](auto sigma_of) {
      sys.sizes.push_back({Int(1)});
      for (int n = 0; n < levels; ++n) {
        Perm sg = sigma_of(n);
        PermBlock b;
        b.target = 0;
        b.source = 0;
        b.sigma = sg;
        sys.blocks.push_back({b});
        sys.sizes.push_back({sys.sizes.back()[0] * sg.size()});
      }
    };
    switch (kind) {
      case FamilyKind::PermNCycle:
        single_summand([](int n) { return Perm::cycle(n + 1); });
        break;
      case FamilyKind::PermIdentity:
        single_summand([&](int) { return Perm::identity(static_cast<int>(identity_letters)); });
        break;
      case FamilyKind::PermConstantCycle:
        single_summand([&](int) { return Perm::cycle(static_cast<int>(constant_cycle)); });
        break;
      case FamilyKind::PermExplicit: {
        require(levels <= explicit_system.depth(), "levels beyond explicit system depth");
        sys.sizes.assign(explicit_system.sizes.begin(), explicit_system.sizes.begin() + levels + 1);
        sys.blocks.assign(explicit_system.blocks.begin(), explicit_system.blocks.begin() + levels);
        break;
      }
      default:
        throw Error("family " + name() + " is not a permutation system");
    }
    sys.validate();
    return sys;
  }

  /// Diagram data of the truncated family. For the rotation family this is
  /// the telescoped data (the data of the skeleton the family actually
  /// builds).
  LevelData data(int levels) const {
    require(levels >= 0, "levels must be nonnegative");
    switch (kind) {
      case FamilyKind::BunceDeddens: {
        LevelData d;
        d.c.assign(levels + 1, 1);
        Int len = 1;
        d.T.push_back(IntMat::diagonal({len}));
        for (int n = 0; n < levels; ++n) {
          long long a = prime_at(n);
          d.A.push_back(IntMat{{a}});
          d.B.push_back(IntMat{{1}});
          len *= a;
          d.T.push_back(IntMat::diagonal({len}));
        }
        return d;
      }
      case FamilyKind::IrrationalRotation: {
        require(levels >= 1, "rotation family needs at least one window");
        std::vector<int> ix = triangular_indices(levels);
        return telescope(irrational_rotation_data(terms, ix.back()), ix);
      }
      case FamilyKind::PermNCycle:
      case FamilyKind::PermIdentity:
      case FamilyKind::PermConstantCycle:
      case FamilyKind::PermExplicit: {
        PermutationSystem sys = system(levels);
        LevelData d;
        for (int n = 0; n <= levels; ++n) {
          d.c.push_back(sys.summands(n));
          d.T.push_back(IntMat::identity(sys.summands(n)));
          if (n < levels) {
            IntMat m = sys.multiplicity_matrix(n);
            d.A.push_back(m);
            d.B.push_back(m);
          }
        }
        return d;
      }
      case FamilyKind::PeriodicData: {
        LevelData d = explicit_data;
        int L = d.depth();
        while (d.depth() < levels) {
          int src = L - period + (d.depth() - L) % period;
          d.A.push_back(d.A[src]);
          d.B.push_back(d.B[src]);
          d.T.push_back(d.T[src + 1]);
          d.c.push_back(d.c[src + 1]);
        }
        if (d.depth() > levels) {
          d.A.resize(levels);
          d.B.resize(levels);
          d.T.resize(levels + 1);
          d.c.resize(levels + 1);
        }
        internal_check(check_compatibility(d).ok(), "periodic continuation incompatible");
        return d;
      }
      case FamilyKind::ExplicitData: {
        require(levels <= explicit_data.depth(), "levels beyond explicit data depth");
        LevelData d = explicit_data;
        d.A.resize(levels);
        d.B.resize(levels);
        d.T.resize(levels + 1);
        d.c.resize(levels + 1);
        return d;
      }
    }
    throw std::logic_error("unreachable");
  }

  /// Data whose direct limits are the family's K-groups: untelescoped for the
  /// rotation family (telescoping leaves the limits unchanged), diagram data
  /// otherwise.
  LevelData k_data(int levels) const {
    if (kind == FamilyKind::IrrationalRotation) return irrational_rotation_data(terms, levels);
    return data(levels);
  }

  GbdSkeleton skeleton(int levels) const {
    switch (kind) {
      case FamilyKind::PermNCycle:
      case FamilyKind::PermIdentity:
      case FamilyKind::PermConstantCycle:
      case FamilyKind::PermExplicit:
        return build_from_permutations(system(levels));
      default:
        return build_from_data(data(levels));
    }
  }

  /// Exact edge-order range per level of the family's skeleton. Maximal-order
  /// construction gives A(i,j)*T(j,j); permutation families give the orbit
  /// sizes of their level permutation.
  std::pair<Int, Int> order_range(int level) const {
    switch (kind) {
      case FamilyKind::PermNCycle:
        return {Int(level + 1), Int(level + 1)};
      case FamilyKind::PermIdentity:
        return {Int(1), Int(1)};
      case FamilyKind::PermConstantCycle:
        return {Int(constant_cycle), Int(constant_cycle)};
      case FamilyKind::PermExplicit: {
        const auto& blocks = explicit_system.blocks.at(level);
        Int mn = -1, mx = 0;
        for (const auto& b : blocks) {
          PermStats st(b.sigma);
          for (const auto& [len, cnt] : st.cycle_type) {
            (void)cnt;
            if (mn < 0 || Int(len) < mn) mn = len;
            if (Int(len) > mx) mx = len;
          }
        }
        return {mn, mx};
      }
      default: {
        LevelData d = data(level + 1);
        Int mn = -1, mx = 0;
        for (int j = 0; j < d.c[level]; ++j)
          for (int i = 0; i < d.c[level + 1]; ++i) {
            if (d.A[level](i, j) == 0) continue;
            Int o = d.A[level](i, j) * d.t_entry(level, j);
            if (mn < 0 || o < mn) mn = o;
            if (o > mx) mx = o;
          }
        return {mn, mx};
      }
    }
  }

  FamilyCertificates certificates() const {
    FamilyCertificates c;
    switch (kind) {
      case FamilyKind::BunceDeddens:
        c.min_order = Growth::Divergent;
        c.max_order = Growth::Divergent;
        c.cofinal = true;
        c.detail =
            "one cycle per level; A_n = [a_{n+1}] positive, edge order a_{n+1}*prod(a_k) >= 2^n";
        break;
      case FamilyKind::IrrationalRotation:
        c.min_order = Growth::Divergent;
        c.max_order = Growth::Divergent;
        c.cofinal = true;
        c.detail =
            "triangular windows: entries of the window products dominate the Fibonacci numbers, "
            "so every entry is positive and the least edge order diverges";
        break;
      case FamilyKind::PermNCycle:
        c.min_order = Growth::Divergent;
        c.max_order = Growth::Divergent;
        c.cofinal = true;
        c.detail = "level n permutation is a single (n+1)-cycle";
        break;
      case FamilyKind::PermIdentity:
        c.min_order = Growth::Bounded;
        c.max_order = Growth::Bounded;
        c.order_bound = 1;
        c.cofinal = true;
        c.detail = "identity permutations: every edge order is 1";
        break;
      case FamilyKind::PermConstantCycle:
        c.min_order = Growth::Bounded;
        c.max_order = Growth::Bounded;
        c.order_bound = constant_cycle;
        c.cofinal = true;
        c.detail = "constant cycle: every edge order equals " + std::to_string(constant_cycle);
        break;
      case FamilyKind::PeriodicData: {
        // orders repeat with the data, so they are bounded by the largest
        // A(i,j)*T(j,j) over prefix and period
        Int bound = 0;
        const LevelData& d = explicit_data;
        for (int n = 0; n < d.depth(); ++n)
          for (int j = 0; j < d.c[n]; ++j)
            for (int i = 0; i < d.c[n + 1]; ++i) {
              Int o = d.A[n](i, j) * d.t_entry(n, j);
              if (o > bound) bound = o;
            }
        c.min_order = Growth::Bounded;
        c.max_order = Growth::Bounded;
        c.order_bound = bound;
        c.cofinal = periodic_cofinal();
        c.detail = "periodic data: edge orders repeat, bounded by " + bound.str();
        break;
      }
      case FamilyKind::PermExplicit:
      case FamilyKind::ExplicitData:
        c.detail = "finite input: no tail certificates";
        break;
    }
    return c;
  }

 private:
  /// Reachability analysis of the periodic continuation: iterate the boolean
  /// pattern of the period product; all-ones somewhere means every window
  /// eventually becomes positive, a cycle without all-ones pins a zero entry
  /// forever.
  std::optional<bool> periodic_cofinal() const {
    const LevelData& d = explicit_data;
    int L = d.depth();
    int c0 = d.c[L];
    if (d.c[L - period] != c0) return std::nullopt;
    std::vector<std::vector<bool>> R(c0, std::vector<bool>(c0, false));
    // boolean pattern of one period product
    std::vector<std::vector<bool>> acc(c0, std::vector<bool>(c0, false));
    for (int i = 0; i < c0; ++i) acc[i][i] = true;
    for (int n = L - period; n < L; ++n) {
      std::vector<std::vector<bool>> nxt(d.c[n + 1], std::vector<bool>(c0, false));
      for (int i = 0; i < d.c[n + 1]; ++i)
        for (int k = 0; k < d.c[n]; ++k)
          if (d.A[n](i, k) != 0)
            for (int j = 0; j < c0; ++j) nxt[i][j] = nxt[i][j] || acc[k][j];
      acc = nxt;
    }
    R = acc;
    auto all_ones = [&](const std::vector<std::vector<bool>>& m) {
      for (const auto& row : m)
        for (bool b : row)
          if (!b) return false;
      return true;
    };
    std::vector<std::vector<std::vector<bool>>> seen{R};
    auto cur = R;
    for (int it = 0; it < 100000; ++it) {
      if (all_ones(cur)) return true;
      std::vector<std::vector<bool>> nxt(c0, std::vector<bool>(c0, false));
      for (int i = 0; i < c0; ++i)
        for (int k = 0; k < c0; ++k)
          if (R[i][k])
            for (int j = 0; j < c0; ++j) nxt[i][j] = nxt[i][j] || cur[k][j];
      if (std::find(seen.begin(), seen.end(), nxt) != seen.end()) return false;
      seen.push_back(nxt);
      cur = nxt;
    }
    return std::nullopt;
  }
};

}  // namespace gbd

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gbd/classify.hpp"
#include "gbd/family.hpp"
#include "gbd/leveldata.hpp"

namespace gbd {

enum class KGroup { K0, K1 };

/// Direct limit of integer lattices along the A maps (K0, with the simplicial
/// order) or the B maps (K1). Family-backed groups know their maps at every
/// level; data-backed groups stop at the truncation.
class LimitGroup {
 public:
  LimitGroup(Family f, KGroup which) : family_(std::move(f)), which_(which) {}
  LimitGroup(LevelData d, KGroup which) : family_(Family::from_data(std::move(d))), which_(which) {}

  KGroup which() const { return which_; }
  const Family& family() const { return family_; }
  bool infinite() const { return family_.infinite(); }

  /// Largest level reachable for data-backed groups; callers cap pushes here.
  int level_limit(int horizon) const { return std::min(horizon, max_levels(family_)); }

  int rank_at(int level) const { return data_up_to(level).c.at(level); }

  const IntMat& map_at(int level) const {
    const LevelData& d = data_up_to(level + 1);
    return which_ == KGroup::K0 ? d.A.at(level) : d.B.at(level);
  }

  const LevelData& data_up_to(int level) const {
    if (static_cast<int>(cache_.has_value() ? cache_->depth() : -1) < level)
      cache_ = family_.k_data(std::max(level, 1));
    return *cache_;
  }

 private:
  Family family_;
  KGroup which_;
  mutable std::optional<LevelData> cache_;
};

/// Group element as a vector over one level; equality is pushforward
/// equivalence, decided by the explicit procedure below (there is no
/// canonical representative in general).
struct LimitElement {
  int level = 0;
  std::vector<Int> vec;

  std::string to_string() const {
    std::ostringstream os;
    os << "(" << level << ", [";
    for (size_t i = 0; i < vec.size(); ++i) os << (i ? " " : "") << vec[i];
    os << "])";
    return os.str();
  }
};

inline LimitElement push(const LimitGroup& g, const LimitElement& e, int to_level) {
  require(to_level >= e.level, "push target below the element's level");
  require(static_cast<int>(e.vec.size()) == g.rank_at(e.level), "vector length mismatch");
  LimitElement out = e;
  for (int n = e.level; n < to_level; ++n) {
    out.vec = g.map_at(n).apply(out.vec);
    out.level = n + 1;
  }
  return out;
}

inline bool is_zero(const std::vector<Int>& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

/// Equality in the limit: push to a common level and walk forward. Vectors
/// that agree somewhere are equal; vectors that differ stay different exactly
/// when all later maps are injective.
inline Verdict equal(const LimitGroup& g, const LimitElement& a, const LimitElement& b,
                     int horizon) {
  int lvl = std::max(a.level, b.level);
  int limit = g.level_limit(horizon);
  require(lvl <= limit, "elements live beyond the horizon");
  LimitElement x = push(g, a, lvl);
  LimitElement y = push(g, b, lvl);
  for (int n = lvl; n <= limit; ++n) {
    if (x.vec == y.vec)
      return verdict(Status::Proven, "representatives agree at level " + std::to_string(n),
                     horizon);
    if (n < limit) {
      x = push(g, x, n + 1);
      y = push(g, y, n + 1);
    }
  }
  // vectors still differ at the last level examined
  if (!g.infinite())
    return verdict(Status::Refuted,
                   "vectors differ at level " + std::to_string(limit) +
                       ", the final level of the truncated data (finite limit group)",
                   horizon);
  // injectivity certificate: all maps beyond must be square with nonzero
  // determinant; periodic families make that a finite check
  bool all_injective = true;
  std::string why;
  int probe_to = limit;
  for (int n = lvl; n < probe_to && all_injective; ++n) {
    const IntMat& m = g.map_at(n);
    if (m.rows() != m.cols() || m.det() == 0) {
      all_injective = false;
      why = "map at level " + std::to_string(n) + " is not injective";
    }
  }
  bool tail_certified = false;
  switch (g.family().kind) {
    case FamilyKind::BunceDeddens:
      tail_certified = true;  // 1x1 maps [a] or [1], never zero
      break;
    case FamilyKind::IrrationalRotation:
      tail_certified = true;  // det [[a,1],[1,0]] = -1
      break;
    case FamilyKind::PermNCycle:
    case FamilyKind::PermIdentity:
    case FamilyKind::PermConstantCycle:
      tail_certified = true;  // 1x1 positive multiplicity matrices
      break;
    case FamilyKind::PeriodicData: {
      tail_certified = true;
      const LevelData& d = g.family().explicit_data;
      for (int n = 0; n < d.depth(); ++n) {
        const IntMat& m = g.which() == KGroup::K0 ? d.A[n] : d.B[n];
        if (m.rows() != m.cols() || m.det() == 0) tail_certified = false;
      }
      break;
    }
    default:
      tail_certified = false;
  }
  if (all_injective && tail_certified)
    return verdict(Status::Refuted,
                   "vectors differ and every later map is injective (nonzero determinant)",
                   horizon);
  return verdict(Status::Evidence,
                 "vectors differ up to level " + std::to_string(limit) +
                     (all_injective ? "" : ("; " + why)),
                 horizon);
}

enum class Sign { Positive, Negative, Zero, Indefinite };

struct PositivityVerdict {
  Verdict verdict;
  Sign sign = Sign::Indefinite;
};

/// Membership in the positive cone of K0 (images of nonnegative vectors).
/// Some pushforward >= 0 proves it; a pushforward <= 0 with a strict negative
/// entry stays that way forever (proper maps), refuting it.
inline PositivityVerdict positive(const LimitGroup& g, const LimitElement& e, int horizon) {
  require(g.which() == KGroup::K0, "positivity is a K0 notion");
  PositivityVerdict out;
  int limit = g.level_limit(horizon);
  LimitElement x = e;
  for (int n = e.level; n <= limit; ++n) {
    bool nonneg = true, nonpos = true, strict_neg = false, strict_pos = false;
    for (const Int& v : x.vec) {
      if (v < 0) {
        nonneg = false;
        strict_neg = true;
      }
      if (v > 0) {
        nonpos = false;
        strict_pos = true;
      }
    }
    if (is_zero(x.vec)) {
      out.sign = Sign::Zero;
      out.verdict = verdict(Status::Proven,
                            "zero at level " + std::to_string(n) + " (positive and negative)",
                            horizon);
      return out;
    }
    if (nonneg && strict_pos) {
      out.sign = Sign::Positive;
      out.verdict = verdict(Status::Proven,
                            "entrywise nonnegative at level " + std::to_string(n), horizon);
      return out;
    }
    if (nonpos && strict_neg) {
      out.sign = Sign::Negative;
      out.verdict =
          verdict(Status::Refuted,
                  "entrywise nonpositive with a negative entry at level " + std::to_string(n) +
                      "; proper maps keep it so",
                  horizon);
      return out;
    }
    if (n < limit) x = push(g, x, n + 1);
  }
  out.sign = Sign::Indefinite;
  out.verdict = verdict(Status::Evidence, "mixed signs through level " + std::to_string(limit),
                        horizon);
  return out;
}

/// Class of the distinguished projection: the cycle lengths of level 0.
inline LimitElement unit_class(const LevelData& d) {
  LimitElement e;
  e.level = 0;
  for (int j = 0; j < d.c[0]; ++j) e.vec.push_back(d.t_entry(0, j));
  return e;
}

inline LimitElement unit_class(const LimitGroup& g) { return unit_class(g.data_up_to(1)); }

/// Path-count bound |Y_{n,j}|: blue paths from any anchor level into the
/// cycle.
inline Int y_count(const GbdSkeleton& s, int level, int cycle) {
  // x_m = A_{m-1} ... applied to cycle lengths; accumulate anchors per level
  Int total = 0;
  for (int anchor = 0; anchor <= level; ++anchor) {
    // path counts from level `anchor` into (level, cycle): product of A's
    // applied to the indicator supported on all anchor-level cycles weighted
    // by their vertex counts
    std::vector<Int> x(s.cycles_at(anchor));
    for (int j = 0; j < s.cycles_at(anchor); ++j) x[j] = s.cycle_length(anchor, j);
    LevelData d = extract_data(s, level);
    for (int m = anchor; m < level; ++m) x = d.A[m].apply(x);
    total += x[cycle];
  }
  return total;
}

struct DimensionRangeVerdict {
  Verdict verdict;
  std::optional<int> witness_level;
};

/// Membership of a K0 class in the set of classes of projections: some
/// representative must fit under the path-count box 0 <= m_j <= |Y_{n,j}|.
inline DimensionRangeVerdict dimension_range_member(const LimitGroup& g, const LimitElement& e,
                                                    const GbdSkeleton& s, int horizon) {
  require(g.which() == KGroup::K0, "dimension range is a K0 notion");
  DimensionRangeVerdict out;
  int limit = std::min(g.level_limit(horizon), s.depth());
  LimitElement x = e;
  if (e.level > limit) {
    out.verdict = verdict(Status::Evidence, "element lives beyond the truncation", horizon);
    return out;
  }
  for (int n = e.level; n <= limit; ++n) {
    bool fits = true;
    for (size_t j = 0; j < x.vec.size(); ++j) {
      if (x.vec[j] < 0 || x.vec[j] > y_count(s, n, static_cast<int>(j))) fits = false;
    }
    if (fits) {
      out.witness_level = n;
      out.verdict = verdict(Status::Proven,
                            "representative fits the path-count box at level " + std::to_string(n),
                            horizon);
      return out;
    }
    if (n < limit) x = push(g, x, n + 1);
  }
  out.verdict =
      verdict(Status::Evidence, "no representative fits within the truncation", horizon);
  return out;
}

struct TorsionWitness {
  Int t;                  // least common multiple of the cycle lengths at the level
  std::vector<Int> p;     // t * vec = T_level * p
};

/// Witness that t times the class lands in the embedded K1 image: t is the
/// lcm of the diagonal of T at the element's level, and p solves
/// t * vec = T p. Divisibility is guaranteed by compatible data; failure
/// signals corrupted data.
inline TorsionWitness torsion_quotient_witness(const LimitGroup& g, const LimitElement& e) {
  require(g.which() == KGroup::K0, "torsion witness applies to K0 elements");
  const LevelData& d = g.data_up_to(e.level == 0 ? 1 : e.level);
  TorsionWitness w;
  w.t = 1;
  for (int j = 0; j < d.c[e.level]; ++j) w.t = int_lcm(w.t, d.t_entry(e.level, j));
  for (size_t j = 0; j < e.vec.size(); ++j) {
    Int num = w.t * e.vec[j];
    const Int& tj = d.t_entry(e.level, static_cast<int>(j));
    internal_check(num % tj == 0, "torsion divisibility failed: data corrupted");
    w.p.push_back(num / tj);
  }
  return w;
}

/// Saturated hereditary set of cycle markers on the collapsed diagram.
struct OrderIdeal {
  std::set<std::pair<int, int>> markers;  // (level, cycle)
  bool persistent = false;                // generated above the deepest level

  friend bool operator<(const OrderIdeal& a, const OrderIdeal& b) { return a.markers < b.markers; }
  friend bool operator==(const OrderIdeal& a, const OrderIdeal& b) {
    return a.markers == b.markers;
  }
};

struct IdealLattice {
  std::vector<OrderIdeal> ideals;  // sorted, deterministic
  int depth = 0;

  const OrderIdeal* find(const std::set<std::pair<int, int>>& m) const {
    for (const auto& i : ideals)
      if (i.markers == m) return &i;
    return nullptr;
  }
};

namespace detail {

inline std::set<std::pair<int, int>> saturate_hereditary(const LevelData& d,
                                                         std::set<std::pair<int, int>> s) {
  bool changed = true;
  while (changed) {
    changed = false;
    // hereditary: a marker pulls in every deeper cycle it receives edges from
    for (const auto& [n, j] : std::set<std::pair<int, int>>(s))
      if (n < d.depth())
        for (int i = 0; i < d.c[n + 1]; ++i)
          if (d.A[n](i, j) != 0 && !s.count({n + 1, i})) {
            s.insert({n + 1, i});
            changed = true;
          }
    // saturated: a cycle all of whose deeper sources lie inside joins too
    for (int n = 0; n < d.depth(); ++n)
      for (int j = 0; j < d.c[n]; ++j) {
        if (s.count({n, j})) continue;
        bool all_in = true;
        bool any = false;
        for (int i = 0; i < d.c[n + 1]; ++i)
          if (d.A[n](i, j) != 0) {
            any = true;
            all_in = all_in && s.count({n + 1, i});
          }
        if (any && all_in) {
          s.insert({n, j});
          changed = true;
        }
      }
  }
  return s;
}

}  // namespace detail

/// All saturated hereditary marker sets of the truncation, as a lattice.
/// Ideals are flagged persistent when they are already generated by their
/// markers above the deepest level (truncation-boundary artifacts are not).
inline IdealLattice order_ideal_lattice(const LevelData& d, int up_to_level,
                                        long long subset_guard = 1 << 20) {
  IdealLattice lat;
  int L = std::min(up_to_level, d.depth());
  lat.depth = L;
  LevelData dd = d;
  dd.A.resize(L);
  dd.B.resize(L);
  dd.T.resize(L + 1);
  dd.c.resize(L + 1);
  std::vector<std::pair<int, int>> markers;
  for (int n = 0; n <= L; ++n)
    for (int j = 0; j < dd.c[n]; ++j) markers.emplace_back(n, j);
  require(static_cast<long long>(markers.size()) <= 62 &&
              (1LL << markers.size()) <= subset_guard,
          "ideal lattice enumeration above the subset guard");
  std::set<std::set<std::pair<int, int>>> seen;
  for (long long mask = 0; mask < (1LL << markers.size()); ++mask) {
    std::set<std::pair<int, int>> s;
    for (size_t k = 0; k < markers.size(); ++k)
      if (mask & (1LL << k)) s.insert(markers[k]);
    seen.insert(detail::saturate_hereditary(dd, s));
  }
  for (const auto& s : seen) {
    OrderIdeal ideal;
    ideal.markers = s;
    std::set<std::pair<int, int>> above;
    for (const auto& m : s)
      if (m.first < L) above.insert(m);
    ideal.persistent =
        s.empty() || static_cast<int>(s.size()) == static_cast<int>(markers.size()) ||
        detail::saturate_hereditary(dd, above) == s;
    lat.ideals.push_back(std::move(ideal));
  }
  std::sort(lat.ideals.begin(), lat.ideals.end());
  return lat;
}

/// Lattice meet: intersection (already saturated hereditary).
inline OrderIdeal ideal_meet(const LevelData& d, const OrderIdeal& a, const OrderIdeal& b) {
  (void)d;
  OrderIdeal out;
  std::set_intersection(a.markers.begin(), a.markers.end(), b.markers.begin(), b.markers.end(),
                        std::inserter(out.markers, out.markers.begin()));
  return out;
}

/// Lattice join: closure of the union.
inline OrderIdeal ideal_join(const LevelData& d, const OrderIdeal& a, const OrderIdeal& b) {
  OrderIdeal out;
  out.markers = a.markers;
  out.markers.insert(b.markers.begin(), b.markers.end());
  out.markers = detail::saturate_hereditary(d, out.markers);
  return out;
}

/// K0 order-ideal generators attached to a marker set: the unit vectors of
/// the member cycles at their levels.
inline std::vector<LimitElement> ideal_generators(const LevelData& d, const OrderIdeal& ideal) {
  std::vector<LimitElement> gens;
  for (const auto& [n, j] : ideal.markers) {
    LimitElement e;
    e.level = n;
    e.vec.assign(d.c[n], 0);
    e.vec[j] = 1;
    gens.push_back(std::move(e));
  }
  return gens;
}

}  // namespace gbd

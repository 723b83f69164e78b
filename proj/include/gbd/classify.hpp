#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>

#include "gbd/family.hpp"
#include "gbd/leveldata.hpp"
#include "gbd/skeleton.hpp"

namespace gbd {

enum class Status { Proven, Refuted, Evidence };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Proven:
      return "proven";
    case Status::Refuted:
      return "refuted";
    case Status::Evidence:
      return "evidence-up-to-horizon";
  }
  return "?";
}

/// Three-valued verdict with a checkable certificate. Proven/Refuted carry a
/// finite witness; Evidence states exactly what was checked.
struct Verdict {
  Status status = Status::Evidence;
  std::string certificate;
  int horizon = 0;

  bool proven() const { return status == Status::Proven; }
  bool refuted() const { return status == Status::Refuted; }
};

inline Verdict verdict(Status st, std::string cert, int horizon) {
  return Verdict{st, std::move(cert), horizon};
}

inline int max_levels(const Family& f) {
  if (f.kind == FamilyKind::ExplicitData) return f.explicit_data.depth();
  if (f.kind == FamilyKind::PermExplicit) return f.explicit_system.depth();
  return 1 << 20;
}

/// Positive-window evidence on explicit data: for each start level, the first
/// level whose accumulated map is entrywise positive, if any.
inline std::string positivity_windows(const LevelData& d, int horizon, bool& all_found) {
  std::ostringstream os;
  all_found = true;
  int limit = std::min(horizon, d.depth());
  for (int n = 0; n <= limit; ++n) {
    IntMat p = IntMat::identity(d.c[n]);
    int hit = p.entrywise_positive() ? n : -1;
    for (int m = n + 1; m <= limit && hit < 0; ++m) {
      p = d.A[m - 1] * p;
      if (p.entrywise_positive()) hit = m;
    }
    if (hit < 0) {
      all_found = false;
      os << " level " << n << ": no positive window within data;";
    } else if (n < 3) {
      os << " level " << n << ": positive by level " << hit << ";";
    }
  }
  return os.str();
}

/// Cofinality of the diagram: every level eventually reaches every cycle.
/// Families answer with their periodic certificates; explicit truncations can
/// only report what the finite windows show.
inline Verdict cofinality(const Family& f, int horizon) {
  FamilyCertificates c = f.certificates();
  if (c.cofinal.has_value()) {
    if (*c.cofinal) return verdict(Status::Proven, c.detail, horizon);
    return verdict(Status::Refuted, "persistent unreachable cycle pattern: " + c.detail, horizon);
  }
  bool all = false;
  LevelData d = f.data(std::min(horizon, max_levels(f)));
  std::string windows = positivity_windows(d, horizon, all);
  return verdict(Status::Evidence,
                 std::string(all ? "all checked levels have positive windows;"
                                 : "some level lacks a positive window in the truncation;") +
                     windows,
                 horizon);
}

inline Verdict cofinality(const LevelData& d, int horizon) {
  bool all = false;
  std::string windows = positivity_windows(d, horizon, all);
  return verdict(Status::Evidence,
                 std::string(all ? "all checked levels have positive windows;"
                                 : "some level lacks a positive window in the truncation;") +
                     windows,
                 horizon);
}

struct LpfSearch {
  bool all_satisfied = true;
  std::string detail;
};

/// For every cycle in the truncation and every bound l <= l_max, search the
/// least depth N such that all blue paths of length N leaving the cycle have
/// order exceeding l. Attainable path orders are propagated cycle-by-cycle
/// through the lcm rule, never by path enumeration.
inline LpfSearch lpf_search(const GbdSkeleton& s, long long l_max) {
  LpfSearch out;
  std::ostringstream os;
  int L = s.depth();
  for (int n = 0; n < L; ++n)
    for (int j = 0; j < s.cycles_at(n); ++j) {
      std::map<int, std::set<Int>> cur{{j, {Int(1)}}};
      std::vector<Int> min_at_depth;
      for (int m = n; m < L; ++m) {
        std::map<int, std::set<Int>> nxt;
        for (const auto& [jj, orders] : cur)
          for (int i = 0; i < s.cycles_at(m + 1); ++i) {
            const auto& blk = s.block(m, jj, i);
            if (blk.empty()) continue;
            std::set<Int> edge_orders;
            for (int e : blk) edge_orders.insert(Int(order_of_edge(s, e)));
            for (const Int& o : orders)
              for (const Int& eo : edge_orders) nxt[i].insert(int_lcm(o, eo));
          }
        cur = std::move(nxt);
        Int mn = -1;
        for (const auto& [i, orders] : cur) {
          (void)i;
          for (const Int& o : orders)
            if (mn < 0 || o < mn) mn = o;
        }
        min_at_depth.push_back(mn);
      }
      for (long long l = 1; l <= l_max; ++l) {
        bool found = false;
        for (const Int& mn : min_at_depth)
          if (mn > l) {
            found = true;
            break;
          }
        if (!found) {
          out.all_satisfied = false;
          os << " cycle(" << n << "," << j << ") l=" << l << ": no depth in truncation;";
          break;  // one witness per cycle is enough
        }
      }
    }
  out.detail = os.str();
  return out;
}

/// Large-permutation factorisations: for every vertex and every bound, deep
/// enough blue paths all have order exceeding the bound.
inline Verdict lpf(const Family& f, int horizon) {
  FamilyCertificates c = f.certificates();
  if (c.min_order == Growth::Divergent)
    return verdict(Status::Proven, "least edge order diverges with the level: " + c.detail,
                   horizon);
  if (c.max_order == Growth::Bounded)
    return verdict(Status::Refuted,
                   "all edge orders bounded by " + c.order_bound.str() +
                       ", so path orders are bounded by a fixed lcm as well: " + c.detail,
                   horizon);
  GbdSkeleton s = f.skeleton(std::min(horizon, max_levels(f)));
  LpfSearch search = lpf_search(s, horizon);
  return verdict(Status::Evidence,
                 search.all_satisfied
                     ? "within the truncation every (cycle, bound) pair admits a depth"
                     : "within the truncation some pairs admit no depth:" + search.detail,
                 horizon);
}

inline Verdict lpf(const GbdSkeleton& s, int horizon) {
  LpfSearch search = lpf_search(s, horizon);
  return verdict(Status::Evidence,
                 search.all_satisfied
                     ? "within the truncation every (cycle, bound) pair admits a depth"
                     : "within the truncation some pairs admit no depth:" + search.detail,
                 horizon);
}

/// Evidence verdicts straight off a truncation, using the actual orbit sizes
/// of its square map (a user skeleton need not have maximal orders).
inline Verdict cofinality(const GbdSkeleton& s, int horizon) {
  return cofinality(extract_data(s), horizon);
}

inline Verdict simplicity(const GbdSkeleton& s, int horizon) {
  Verdict cof = cofinality(s, horizon);
  Int seen_max = 0;
  for (size_t e = 0; e < s.edges.size(); ++e) {
    Int o(order_of_edge(s, static_cast<int>(e)));
    if (o > seen_max) seen_max = o;
  }
  return verdict(Status::Evidence,
                 "finite truncation; cofinality " + std::string(status_name(cof.status)) +
                     "; max edge order seen " + seen_max.str(),
                 horizon);
}

/// Simplicity: cofinal and edge orders unbounded, refuted when either fails
/// with a certificate.
inline Verdict simplicity(const Family& f, int horizon) {
  Verdict cof = cofinality(f, horizon);
  FamilyCertificates c = f.certificates();
  if (cof.refuted()) return verdict(Status::Refuted, "not cofinal: " + cof.certificate, horizon);
  if (c.max_order == Growth::Bounded)
    return verdict(Status::Refuted, "edge orders bounded by " + c.order_bound.str(), horizon);
  if (cof.proven() && c.max_order == Growth::Divergent)
    return verdict(Status::Proven, "cofinal and edge orders unbounded (" + c.detail + ")",
                   horizon);
  Int seen_max = 0;
  int levels = std::min(horizon, max_levels(f));
  for (int n = 0; n < levels; ++n) {
    auto [mn, mx] = f.order_range(n);
    (void)mn;
    if (mx > seen_max) seen_max = mx;
  }
  return verdict(Status::Evidence,
                 "cofinality " + std::string(status_name(cof.status)) + "; max edge order seen " +
                     seen_max.str(),
                 horizon);
}

enum class RealRank { Zero, One, Unknown };

inline const char* rank_name(RealRank r) {
  switch (r) {
    case RealRank::Zero:
      return "zero";
    case RealRank::One:
      return "one";
    case RealRank::Unknown:
      return "unknown";
  }
  return "?";
}

struct RankVerdict {
  Verdict verdict;
  RealRank rank = RealRank::Unknown;
};

/// Tail certificate: the sums of 1 - beta_N over levels converge for this N.
inline bool alpha_tail_converges(const Family& f, long long N) {
  switch (f.kind) {
    case FamilyKind::PermIdentity:
      return true;  // beta_N = 1 at every level
    case FamilyKind::PermConstantCycle:
      return N % f.constant_cycle == 0;  // beta_N = 1 once the cycle divides N
    default:
      return false;
  }
}

/// Real rank: zero when large-permutation factorisations and cofinality are
/// both proven; one for length-1-cycle families whose upper alpha series has
/// a convergent tail certificate. Everything else stays evidence with the
/// sub-verdicts attached.
inline RankVerdict real_rank(const Family& f, int horizon) {
  RankVerdict out;
  Verdict l = lpf(f, horizon);
  Verdict cof = cofinality(f, horizon);
  if (l.proven() && cof.proven()) {
    out.rank = RealRank::Zero;
    out.verdict = verdict(Status::Proven,
                          "large-permutation factorisations and cofinality both proven", horizon);
    return out;
  }
  if (f.length_one_cycles() && cof.proven()) {
    for (long long N = 1; N <= horizon; ++N)
      if (alpha_tail_converges(f, N)) {
        out.rank = RealRank::One;
        out.verdict = verdict(
            Status::Proven,
            "upper alpha series converges for N = " + std::to_string(N) + " (tail certificate)",
            horizon);
        return out;
      }
  }
  out.rank = RealRank::Unknown;
  std::string cert = "no rank certificate; lpf " + std::string(status_name(l.status)) +
                     ", cofinality " + std::string(status_name(cof.status));
  if (f.length_one_cycles()) {
    // report the first defect partial sums so the evidence is inspectable
    try {
      int levels = std::min(horizon, max_levels(f));
      GbdSkeleton s = f.skeleton(levels);
      std::ostringstream os;
      for (long long N = 1; N <= 2; ++N) {
        PermutationSystem sys = permutation_system_from_skeleton(s);
        Rat hi = 0;
        os << "; upper alpha partial sums N=" << N << ":";
        for (int j = 0; j < sys.depth(); ++j) {
          std::optional<Rat> bmin;
          for (const PermBlock& b : sys.blocks[j]) {
            Rat bb = beta(b.sigma, N);
            if (!bmin || bb < *bmin) bmin = bb;
          }
          hi += 1 - *bmin;
          os << " " << hi;
        }
      }
      cert += os.str();
    } catch (const Error&) {
    }
  }
  out.verdict = verdict(Status::Evidence, cert, horizon);
  return out;
}

}  // namespace gbd

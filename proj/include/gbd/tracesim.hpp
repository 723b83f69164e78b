#pragma once

#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbd/builders.hpp"
#include "gbd/family.hpp"
#include "gbd/laurent.hpp"
#include "gbd/measure.hpp"
#include "gbd/permsystem.hpp"

namespace gbd {

/// A trace on one level of a permutation tower: a weight and a circle measure
/// per summand. Weights sum to 1; zero-weight summands carry Lebesgue and a
/// degeneracy flag (their measure never matters).
struct TraceState {
  int level = 0;
  std::vector<Rat> weights;
  std::vector<CircleMeasure> measures;
  std::vector<bool> degenerate;

  void check() const {
    Rat total = 0;
    for (const Rat& a : weights) {
      require(a >= 0, "trace weights must be nonnegative");
      total += a;
    }
    require(total == 1, "trace weights must sum to 1");
  }
};

/// Exact total-variation distance between two states with identical weights:
/// the weighted sum of the summand distances.
inline Rat state_distance(const TraceState& a, const TraceState& b) {
  require(a.weights == b.weights, "state distance needs matching weights");
  Rat d = 0;
  for (size_t t = 0; t < a.weights.size(); ++t)
    d += a.weights[t] * tv_distance(a.measures[t], b.measures[t]);
  return d;
}

/// Pulls a trace one level down the tower: weights follow the multiplicity
/// bookkeeping, measures are averaged blockwise through the orbit statistics.
inline TraceState trace_pullback(const PermutationSystem& sys, const TraceState& upper) {
  int j = upper.level - 1;
  require(j >= 0 && j < static_cast<int>(sys.blocks.size()), "no inclusion below this level");
  require(static_cast<int>(upper.weights.size()) == sys.summands(upper.level),
          "weight count mismatch");
  TraceState out;
  out.level = j;
  for (int t = 0; t < sys.summands(j); ++t) {
    Rat a = 0;
    for (const PermBlock& b : sys.blocks[j]) {
      if (b.source != t) continue;
      a += upper.weights[b.target] * Rat(Int(b.sigma.size()) * sys.sizes[j][t],
                                         sys.sizes[j + 1][b.target]);
    }
    out.weights.push_back(a);
    if (a == 0) {
      out.measures.push_back(CircleMeasure::lebesgue());
      out.degenerate.push_back(true);
      continue;
    }
    std::vector<std::pair<Rat, CircleMeasure>> parts;
    for (const PermBlock& b : sys.blocks[j]) {
      if (b.source != t) continue;
      Rat outer = upper.weights[b.target] *
                  Rat(Int(b.sigma.size()) * sys.sizes[j][t], sys.sizes[j + 1][b.target]) / a;
      if (outer == 0) continue;
      PermStats st(b.sigma);
      for (const auto& [len, cnt] : st.cycle_type) {
        Rat inner = Rat(Int(len) * cnt, Int(b.sigma.size()));
        parts.emplace_back(outer * inner, markov_apply(len, upper.measures[b.target]));
      }
    }
    out.measures.push_back(convex(parts));
    out.degenerate.push_back(false);
  }
  out.check();
  return out;
}

struct AlphaSeries {
  long long N = 1;
  std::vector<Rat> beta_min, beta_max;          // per level
  std::vector<Rat> lower_partial, upper_partial;  // partial sums of 1-beta
  enum class Tail { Divergent, Convergent, Unknown } lower_tail = Tail::Unknown,
                                                     upper_tail = Tail::Unknown;
};

/// Per-level extremes of beta_N over the nonzero blocks and the partial sums
/// of their defects. The lower series uses the max (best block), the upper
/// series the min.
inline AlphaSeries alpha_series(const PermutationSystem& sys, long long N, int levels) {
  require(levels <= sys.depth(), "levels beyond the system depth");
  AlphaSeries out;
  out.N = N;
  Rat lo = 0, hi = 0;
  for (int j = 0; j < levels; ++j) {
    std::optional<Rat> bmin, bmax;
    for (const PermBlock& b : sys.blocks[j]) {
      Rat bb = beta(b.sigma, N);
      if (!bmin || bb < *bmin) bmin = bb;
      if (!bmax || bb > *bmax) bmax = bb;
    }
    require(bmin.has_value(), "level without blocks");
    out.beta_min.push_back(*bmin);
    out.beta_max.push_back(*bmax);
    lo += 1 - *bmax;
    hi += 1 - *bmin;
    out.lower_partial.push_back(lo);
    out.upper_partial.push_back(hi);
  }
  return out;
}

/// Family version: attaches the tail certificate when the descriptor has one.
inline AlphaSeries alpha_series(const Family& f, long long N, int levels) {
  PermutationSystem sys;
  switch (f.kind) {
    case FamilyKind::PermNCycle:
    case FamilyKind::PermIdentity:
    case FamilyKind::PermConstantCycle:
    case FamilyKind::PermExplicit:
      sys = f.system(levels);
      break;
    case FamilyKind::IrrationalRotation:
      sys = permutation_system_from_skeleton(f.skeleton(levels));
      break;
    default:
      sys = permutation_system_from_skeleton(f.skeleton(levels));
      break;
  }
  AlphaSeries out = alpha_series(sys, N, levels);
  switch (f.kind) {
    case FamilyKind::PermNCycle:
      // beta_N(cycle(n+1)) is 0 once n+1 does not divide N: infinitely often
      out.lower_tail = AlphaSeries::Tail::Divergent;
      out.upper_tail = AlphaSeries::Tail::Divergent;
      break;
    case FamilyKind::PermIdentity:
      out.lower_tail = AlphaSeries::Tail::Convergent;
      out.upper_tail = AlphaSeries::Tail::Convergent;
      break;
    case FamilyKind::PermConstantCycle:
      out.lower_tail = out.upper_tail = (N % f.constant_cycle == 0)
                                            ? AlphaSeries::Tail::Convergent
                                            : AlphaSeries::Tail::Divergent;
      break;
    case FamilyKind::IrrationalRotation:
      // block cycle lengths diverge, so beta_N is eventually 0 for every N
      out.lower_tail = out.upper_tail = AlphaSeries::Tail::Divergent;
      break;
    default:
      break;
  }
  return out;
}

/// As above but for a diagram whose red cycles all have length one.
inline AlphaSeries alpha_series(const GbdSkeleton& s, long long N, int levels) {
  return alpha_series(permutation_system_from_skeleton(s), N, levels);
}

struct LiftResult {
  std::vector<TraceState> states;     // the constant-measure tower, level 0..L
  std::vector<Rat> distances;        // ||pullback(state_{i+1}) - state_i||
  std::vector<Rat> bounds;           // 1 - beta_min(N, i)
  std::vector<Rat> delta;            // tail sums of the bounds within the window
};

/// Derives the trace weights of the tower from the top-level weights.
inline std::vector<std::vector<Rat>> weights_from_top(const PermutationSystem& sys,
                                                      const std::vector<Rat>& top, int levels) {
  require(static_cast<int>(top.size()) == sys.summands(levels), "top weight count mismatch");
  std::vector<std::vector<Rat>> w(levels + 1);
  w[levels] = top;
  for (int j = levels - 1; j >= 0; --j) {
    w[j].assign(sys.summands(j), Rat(0));
    for (const PermBlock& b : sys.blocks[j])
      w[j][b.source] +=
          w[j + 1][b.target] * Rat(Int(b.sigma.size()) * sys.sizes[j][b.source],
                                   sys.sizes[j + 1][b.target]);
  }
  return w;
}

/// Builds the constant-measure trace tower for a measure fixed by the order-N
/// averaging and verifies the telescoping distance bounds exactly.
inline LiftResult trace_lift(const PermutationSystem& sys, const std::vector<Rat>& top_weights,
                             const CircleMeasure& mu, long long N, int levels) {
  require(fixed_by(mu, N), "measure is not fixed by the order-N averaging");
  LiftResult out;
  std::vector<std::vector<Rat>> w = weights_from_top(sys, top_weights, levels);
  for (int j = 0; j <= levels; ++j) {
    TraceState st;
    st.level = j;
    st.weights = w[j];
    st.measures.assign(sys.summands(j), mu);
    st.degenerate.assign(sys.summands(j), false);
    st.check();
    out.states.push_back(std::move(st));
  }
  AlphaSeries alpha = alpha_series(sys, N, levels);
  for (int i = 0; i < levels; ++i) {
    TraceState pulled = trace_pullback(sys, out.states[i + 1]);
    Rat d = state_distance(pulled, out.states[i]);
    Rat bound = 1 - alpha.beta_min[i];
    internal_check(d <= bound, "pullback distance exceeded the telescoping bound");
    out.distances.push_back(d);
    out.bounds.push_back(bound);
  }
  Rat tail = 0;
  out.delta.assign(levels + 1, Rat(0));
  for (int j = levels - 1; j >= 0; --j) {
    tail += out.bounds[j];
    out.delta[j] = tail;
  }
  return out;
}

/// Normalised trace against a measure: sum over exponents of the matrix trace
/// of each coefficient times the measure's Fourier coefficient. Floating
/// evaluation; everything upstream of it stays exact.
inline std::complex<double> evaluate_trace(const CircleMeasure& mu, const LaurentMat& f) {
  require(f.dim() > 0, "empty block");
  std::complex<double> out(0.0, 0.0);
  LaurentPoly tr = f.trace();
  for (const auto& [k, c] : tr.terms())
    out += CircleMeasure::rat_to_double(c) * mu.fourier(k);
  out /= static_cast<double>(f.dim());
  return out;
}

/// Trace of a block element against a state: weighted sum of the summand
/// traces.
inline std::complex<double> evaluate_trace(const TraceState& st,
                                           const std::vector<LaurentMat>& blocks) {
  require(st.weights.size() == blocks.size(), "summand count mismatch");
  std::complex<double> out(0.0, 0.0);
  for (size_t t = 0; t < blocks.size(); ++t) {
    if (st.weights[t] == 0) continue;
    out += CircleMeasure::rat_to_double(st.weights[t]) * evaluate_trace(st.measures[t], blocks[t]);
  }
  return out;
}

struct AttractorReport {
  std::vector<std::pair<long long, bool>> fixed;  // k -> fixed exactly
  double max_fourier_claimed = 0;                 // over coefficients the claim covers
  double max_fourier_all = 0;                     // over all 0 < m <= M
  bool claim_holds = true;                        // claimed coefficients below tolerance
  double tolerance = 1e-9;
};

/// Fourier-side convergence to Lebesgue: a coefficient mu^(m) must vanish as
/// soon as the measure is exactly fixed by some averaging whose order does
/// not divide m. Reports the largest claimed and overall coefficients.
inline AttractorReport lebesgue_attractor_check(const CircleMeasure& mu,
                                                const std::vector<long long>& ks, long long M,
                                                double tolerance = 1e-9) {
  AttractorReport rep;
  rep.tolerance = tolerance;
  for (long long k : ks) rep.fixed.emplace_back(k, fixed_by(mu, k));
  for (long long m = 1; m <= M; ++m) {
    double mag = std::abs(mu.fourier(m));
    rep.max_fourier_all = std::max(rep.max_fourier_all, mag);
    bool claimed = false;
    for (const auto& [k, fx] : rep.fixed)
      if (fx && m % k != 0) claimed = true;
    if (claimed) {
      rep.max_fourier_claimed = std::max(rep.max_fourier_claimed, mag);
      if (mag > tolerance) rep.claim_holds = false;
    }
  }
  return rep;
}

}  // namespace gbd

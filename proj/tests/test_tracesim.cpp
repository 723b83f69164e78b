#include "doctest.h"

#include <complex>

#include "gbd/tracesim.hpp"
#include "support.hpp"

using namespace gbd;
using namespace testsupport;

namespace {

CircleMeasure random_atomic(Rng& rng, int max_atoms = 4, long long max_den = 12) {
  std::map<Rat, Rat> atoms;
  int n = static_cast<int>(rng.uniform(1, max_atoms));
  std::vector<long long> cuts;
  long long total = 0;
  for (int i = 0; i < n; ++i) {
    cuts.push_back(rng.uniform(1, 6));
    total += cuts.back();
  }
  bool with_leb = rng.coin();
  long long lebcut = with_leb ? rng.uniform(1, 6) : 0;
  total += lebcut;
  for (int i = 0; i < n; ++i) {
    Rat angle(rng.uniform(0, max_den - 1), rng.uniform(1, max_den));
    atoms[angle] += Rat(cuts[i], total);
  }
  std::map<Rat, Rat> cleaned;
  for (auto& [a, w] : atoms)
    if (w > 0) cleaned[a] = w;
  return CircleMeasure::mix(lebcut > 0 ? Rat(lebcut, total) : Rat(0), cleaned);
}

PermutationSystem random_system(Rng& rng, int levels, int max_summands = 3, int max_letters = 3) {
  PermutationSystem sys;
  int r0 = static_cast<int>(rng.uniform(1, max_summands));
  sys.sizes.push_back(std::vector<Int>(r0, Int(1)));
  for (int n = 0; n < levels; ++n) {
    int rn = static_cast<int>(sys.sizes[n].size());
    int rn1 = static_cast<int>(rng.uniform(1, max_summands));
    sys.blocks.emplace_back();
    std::vector<Int> next(rn1, 0);
    for (int i = 0; i < rn1; ++i) {
      int j0 = static_cast<int>(rng.uniform(0, rn - 1));
      for (int j = 0; j < rn; ++j) {
        if (j != j0 && !rng.coin()) continue;
        Perm p;
        p.image = rng.permutation(static_cast<int>(rng.uniform(1, max_letters)));
        sys.blocks[n].push_back({i, j, p});
        next[i] += Int(p.size()) * sys.sizes[n][j];
      }
    }
    for (int j = 0; j < rn; ++j) {
      bool used = false;
      for (const auto& b : sys.blocks[n]) used = used || b.source == j;
      if (!used) {
        sys.blocks[n].push_back({0, j, Perm::identity(1)});
        next[0] += sys.sizes[n][j];
      }
    }
    sys.sizes.push_back(next);
  }
  sys.validate();
  return sys;
}

std::vector<Rat> random_top_weights(Rng& rng, int count) {
  std::vector<long long> cuts;
  long long total = 0;
  for (int i = 0; i < count; ++i) {
    cuts.push_back(rng.uniform(0, 5));
    total += cuts.back();
  }
  if (total == 0) {
    cuts[0] = 1;
    total = 1;
  }
  std::vector<Rat> w;
  for (long long c : cuts) w.emplace_back(c, total);
  return w;
}

LaurentMat random_block(Rng& rng, int n) {
  LaurentMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < 2; ++t)
        if (rng.coin())
          m(i, j) += LaurentPoly::monomial(Rat(rng.uniform(-3, 3), rng.uniform(1, 3)),
                                           rng.uniform(-3, 3));
  return m;
}

}  // namespace

TEST_CASE("averaging: point mass splits evenly, Lebesgue is fixed") {
  CircleMeasure half = markov_apply(2, CircleMeasure::point(Rat(0)));
  CHECK(half == CircleMeasure::mix(Rat(0), {{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}}));
  CHECK(markov_apply(7, CircleMeasure::lebesgue()) == CircleMeasure::lebesgue());
}

TEST_CASE("averaging composition law and mass preservation") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    CircleMeasure mu = random_atomic(rng);
    long long k = rng.uniform(1, 12), l = rng.uniform(1, 12);
    long long lcm = k / ll_gcd(k, l) * l;
    CircleMeasure both = markov_apply(k, markov_apply(l, mu));
    CHECK(both == markov_apply(lcm, mu));
    both.check();
    CHECK(both.lebesgue_weight() == mu.lebesgue_weight());
  }
}

TEST_CASE("averaging is affine and TV non-expansive") {
  Rng rng(13);
  for (int t = 0; t < 60; ++t) {
    CircleMeasure mu = random_atomic(rng);
    CircleMeasure nu = random_atomic(rng);
    long long k = rng.uniform(1, 12);
    CircleMeasure mixed = convex({{Rat(1, 3), mu}, {Rat(2, 3), nu}});
    CircleMeasure lhs = markov_apply(k, mixed);
    CircleMeasure rhs =
        convex({{Rat(1, 3), markov_apply(k, mu)}, {Rat(2, 3), markov_apply(k, nu)}});
    CHECK(lhs == rhs);
    CHECK(tv_distance(markov_apply(k, mu), markov_apply(k, nu)) <= tv_distance(mu, nu));
  }
}

TEST_CASE("orbit statistics: the (123)(45)(6) example and the degenerate shapes") {
  Perm p;
  p.image = {1, 2, 0, 4, 3, 5};  // a 3-cycle, a 2-cycle, a fixed point
  PermStats st(p);
  CHECK(st.kappa == 3);
  CHECK(beta(st, 2) == Rat(1, 2));
  CHECK(beta(st, 6) == 1);

  Perm id = Perm::identity(5);
  CHECK(kappa(id) == 1);
  for (long long n = 1; n <= 6; ++n) CHECK(beta(id, n) == 1);

  Perm c4 = Perm::cycle(4);
  CHECK(beta(c4, 4) == 1);
  CHECK(beta(c4, 8) == 1);
  CHECK(beta(c4, 6) == 0);
}

TEST_CASE("alpha series: n-cycle family diverges, constant cycle vanishes") {
  AlphaSeries nc = alpha_series(Family::perm_ncycle(), 1, 12);
  CHECK(nc.lower_partial.back() == 11);
  CHECK(nc.lower_tail == AlphaSeries::Tail::Divergent);

  AlphaSeries cc = alpha_series(Family::perm_constant_cycle(4), 4, 10);
  CHECK(cc.upper_partial.back() == 0);
  CHECK(cc.upper_tail == AlphaSeries::Tail::Convergent);

  AlphaSeries ccb = alpha_series(Family::perm_constant_cycle(4), 3, 10);
  CHECK(ccb.upper_tail == AlphaSeries::Tail::Divergent);
}

TEST_CASE("alpha series: single-summand towers have equal lower and upper sums") {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    PermutationSystem sys = random_system(rng, 5, 1);
    AlphaSeries a = alpha_series(sys, rng.uniform(1, 6), 5);
    CHECK(a.lower_partial == a.upper_partial);
  }
}

TEST_CASE("alpha series rejects diagrams with longer cycles") {
  CHECK_THROWS_AS(alpha_series(dyadic_fixture(2), 2, 2), Error);
}

TEST_CASE("pullback: single 2-cycle block averages a point mass") {
  PermutationSystem sys;
  sys.sizes = {{Int(1)}, {Int(2)}};
  sys.blocks.resize(1);
  sys.blocks[0].push_back({0, 0, Perm::cycle(2)});
  sys.validate();
  TraceState top;
  top.level = 1;
  top.weights = {Rat(1)};
  top.measures = {CircleMeasure::point(Rat(0))};
  top.degenerate = {false};
  TraceState low = trace_pullback(sys, top);
  CHECK(low.weights == std::vector<Rat>{Rat(1)});
  CHECK(low.measures[0] ==
        CircleMeasure::mix(Rat(0), {{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}}));
}

TEST_CASE("pullback: identity blocks copy the measure") {
  PermutationSystem sys;
  sys.sizes = {{Int(1)}, {Int(3)}};
  sys.blocks.resize(1);
  sys.blocks[0].push_back({0, 0, Perm::identity(3)});
  sys.validate();
  Rng rng(19);
  for (int t = 0; t < 10; ++t) {
    TraceState top;
    top.level = 1;
    top.weights = {Rat(1)};
    top.measures = {random_atomic(rng)};
    top.degenerate = {false};
    TraceState low = trace_pullback(sys, top);
    CHECK(low.measures[0] == top.measures[0]);
  }
}

TEST_CASE("pullback weights follow the multiplicity bookkeeping") {
  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    PermutationSystem sys = random_system(rng, 3);
    TraceState top;
    top.level = 3;
    top.weights = random_top_weights(rng, sys.summands(3));
    for (int s = 0; s < sys.summands(3); ++s) {
      top.measures.push_back(random_atomic(rng));
      top.degenerate.push_back(false);
    }
    TraceState low = trace_pullback(sys, top);
    low.check();
    for (int tt = 0; tt < sys.summands(2); ++tt) {
      Rat want = 0;
      for (const PermBlock& b : sys.blocks[2])
        if (b.source == tt)
          want += top.weights[b.target] *
                  Rat(Int(b.sigma.size()) * sys.sizes[2][tt], sys.sizes[3][b.target]);
      CHECK(low.weights[tt] == want);
    }
  }
}

TEST_CASE("trace lift: constant-cycle tower has zero distances") {
  PermutationSystem sys;
  sys.sizes = {{Int(1)}};
  for (int n = 0; n < 5; ++n) {
    sys.blocks.emplace_back();
    sys.blocks[n].push_back({0, 0, Perm::cycle(3)});
    sys.sizes.push_back({sys.sizes.back()[0] * 3});
  }
  sys.validate();
  // uniform atoms on the cube roots of unity are fixed by the order-3 average
  CircleMeasure mu = markov_apply(3, CircleMeasure::point(Rat(0)));
  LiftResult lift = trace_lift(sys, {Rat(1)}, mu, 3, 5);
  for (const Rat& d : lift.distances) CHECK(d == 0);
  for (const Rat& dl : lift.delta) CHECK(dl == 0);
}

TEST_CASE("trace lift: Lebesgue is consistent for any system") {
  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    PermutationSystem sys = random_system(rng, 4);
    LiftResult lift = trace_lift(sys, random_top_weights(rng, sys.summands(4)),
                                 CircleMeasure::lebesgue(), 1, 4);
    for (const Rat& d : lift.distances) CHECK(d == 0);
  }
}

TEST_CASE("trace lift: distances bounded by the telescoping estimate") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    PermutationSystem sys = random_system(rng, 6);
    long long N = rng.uniform(1, 4);
    CircleMeasure mu = markov_apply(N, random_atomic(rng));
    REQUIRE(fixed_by(mu, N));
    LiftResult lift = trace_lift(sys, random_top_weights(rng, sys.summands(6)), mu, N, 6);
    AlphaSeries alpha = alpha_series(sys, N, 6);
    for (size_t i = 0; i < lift.distances.size(); ++i)
      CHECK(lift.distances[i] <= 1 - alpha.beta_min[i]);
  }
}

TEST_CASE("trace lift rejects unfixed measures") {
  PermutationSystem sys;
  sys.sizes = {{Int(1)}, {Int(2)}};
  sys.blocks.resize(1);
  sys.blocks[0].push_back({0, 0, Perm::cycle(2)});
  sys.validate();
  CHECK_THROWS_AS(trace_lift(sys, {Rat(1)}, CircleMeasure::point(Rat(0)), 2, 1), Error);
}

TEST_CASE("evaluate: identity against any measure gives 1, z against a point mass") {
  Rng rng(37);
  for (int t = 0; t < 10; ++t) {
    CircleMeasure mu = random_atomic(rng);
    std::complex<double> one = evaluate_trace(mu, LaurentMat::identity(3));
    CHECK(std::abs(one - std::complex<double>(1, 0)) < 1e-12);
  }
  LaurentMat zid = LaurentMat::identity(2);
  zid(0, 0) = zid(1, 1) = LaurentPoly::monomial(Rat(1), 1);
  std::complex<double> v = evaluate_trace(CircleMeasure::point(Rat(0)), zid);
  CHECK(std::abs(v - std::complex<double>(1, 0)) < 1e-12);
}

TEST_CASE("trace recursion through the permutation embedding") {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    int m = static_cast<int>(rng.uniform(1, 6));
    int n = static_cast<int>(rng.uniform(1, 3));
    Perm sigma;
    sigma.image = rng.permutation(m);
    CircleMeasure mu2 = random_atomic(rng);
    LaurentMat f = random_block(rng, n);
    PermStats st(sigma);
    std::vector<std::pair<Rat, CircleMeasure>> parts;
    for (const auto& [len, cnt] : st.cycle_type)
      parts.emplace_back(Rat(Int(len) * cnt, Int(m)), markov_apply(len, mu2));
    CircleMeasure mu1 = convex(parts);
    std::complex<double> lhs = evaluate_trace(mu2, psi_sigma(sigma, f));
    std::complex<double> rhs = evaluate_trace(mu1, f);
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }
}

TEST_CASE("trace functional distance bounded by TV distance times coefficient mass") {
  // one-sided check: the trace functionals differ by at most the measure-norm
  // of the difference (twice the normalised TV) times the coefficient mass
  Rng rng(43);
  for (int t = 0; t < 40; ++t) {
    CircleMeasure mu = random_atomic(rng);
    CircleMeasure nu = random_atomic(rng);
    LaurentMat f = random_block(rng, static_cast<int>(rng.uniform(1, 3)));
    double lhs = std::abs(evaluate_trace(mu, f) - evaluate_trace(nu, f));
    Rat mass = 0;
    for (int i = 0; i < f.dim(); ++i) mass += f(i, i).coeff_abs_sum();
    double bound = 2.0 * CircleMeasure::rat_to_double(tv_distance(mu, nu)) *
                   (CircleMeasure::rat_to_double(mass) / f.dim());
    CHECK(lhs <= bound + 1e-9);
  }
}

TEST_CASE("attractor report: Lebesgue, an unfixed point mass, and iterated averages") {
  AttractorReport leb = lebesgue_attractor_check(CircleMeasure::lebesgue(), {2, 3, 5}, 5);
  CHECK(leb.claim_holds);
  CHECK(leb.max_fourier_all <= 1e-12);

  AttractorReport pt = lebesgue_attractor_check(CircleMeasure::point(Rat(0)), {2, 3}, 4);
  for (const auto& [k, fx] : pt.fixed) {
    (void)k;
    CHECK_FALSE(fx);
  }

  CircleMeasure m30 =
      markov_apply(5, markov_apply(3, markov_apply(2, CircleMeasure::point(Rat(0)))));
  AttractorReport it = lebesgue_attractor_check(m30, {2, 3, 5, 30}, 5);
  CHECK(it.claim_holds);
  CHECK(it.max_fourier_claimed <= 1e-9);
  CHECK(it.max_fourier_all <= 1e-9);
}

TEST_CASE("pullback flags zero-weight summands and parks them on Lebesgue") {
  PermutationSystem sys;
  sys.sizes = {{Int(1), Int(1)}, {Int(1), Int(1)}};
  sys.blocks.resize(1);
  sys.blocks[0].push_back({0, 0, Perm::identity(1)});
  sys.blocks[0].push_back({1, 1, Perm::identity(1)});
  sys.validate();
  TraceState top;
  top.level = 1;
  top.weights = {Rat(1), Rat(0)};
  top.measures = {CircleMeasure::point(Rat(1, 3)), CircleMeasure::point(Rat(0))};
  top.degenerate = {false, false};
  TraceState low = trace_pullback(sys, top);
  CHECK(low.weights == std::vector<Rat>{Rat(1), Rat(0)});
  CHECK(low.degenerate[1]);
  CHECK(low.measures[1] == CircleMeasure::lebesgue());
  CHECK(low.measures[0] == top.measures[0]);
}

TEST_CASE("state-level trace evaluation weights the summands") {
  TraceState st;
  st.level = 0;
  st.weights = {Rat(1, 4), Rat(3, 4)};
  st.measures = {CircleMeasure::point(Rat(0)), CircleMeasure::lebesgue()};
  st.degenerate = {false, false};
  std::vector<LaurentMat> blocks;
  LaurentMat z1(1);
  z1(0, 0) = LaurentPoly::monomial(Rat(1), 1);
  blocks.push_back(z1);                       // trace z d(point) = 1
  blocks.push_back(LaurentMat::identity(2));  // trace 1 dLebesgue = 1
  std::complex<double> v = evaluate_trace(st, blocks);
  CHECK(std::abs(v - std::complex<double>(0.25 + 0.75, 0)) < 1e-12);
}

TEST_CASE("composed pullbacks stay within the telescoped bound sum") {
  Rng rng(53);
  for (int t = 0; t < 10; ++t) {
    PermutationSystem sys = random_system(rng, 5);
    long long N = rng.uniform(1, 3);
    CircleMeasure mu = markov_apply(N, random_atomic(rng));
    LiftResult lift = trace_lift(sys, random_top_weights(rng, sys.summands(5)), mu, N, 5);
    // pull the top state all the way down; the distance to the level-0
    // constant state telescopes through the per-level bounds
    TraceState cur = lift.states[5];
    for (int j = 5; j > 0; --j) cur = trace_pullback(sys, cur);
    CHECK(state_distance(cur, lift.states[0]) <= lift.delta[0]);
  }
}

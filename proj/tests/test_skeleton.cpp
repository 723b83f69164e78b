#include "doctest.h"

#include "gbd/skeleton.hpp"
#include "support.hpp"

using namespace gbd;
using namespace testsupport;

TEST_CASE("dyadic fixture validates") {
  GbdSkeleton s = dyadic_fixture(3);
  CHECK(s.depth() == 3);
  CHECK(s.vertices_at(0) == 1);
  CHECK(s.vertices_at(1) == 2);
  CHECK(s.vertices_at(2) == 4);
  CHECK(s.vertices_at(3) == 8);
  CHECK(validate_gbd(s).ok());
}

TEST_CASE("depth-0 diagram with a single red loop is valid") {
  GbdSkeleton s({{1}}, {}, {});
  CHECK(s.depth() == 0);
  CHECK(validate_gbd(s).ok());
}

TEST_CASE("redirecting one square breaks the block bijection") {
  GbdSkeleton s = dyadic_fixture(3);
  // point two edges of one block at the same successor
  REQUIRE(s.edges.size() >= 2);
  int a = -1, b = -1;
  for (int n = 0; n < s.depth() && a < 0; ++n) {
    const auto& blk = s.block(n, 0, 0);
    if (blk.size() >= 2) {
      a = blk[0];
      b = blk[1];
    }
  }
  REQUIRE(a >= 0);
  std::vector<int> sq = s.fsucc;
  sq[b] = sq[a];
  GbdSkeleton broken(s.levels, s.edges, sq);
  ValidationReport rep = validate_gbd(broken);
  CHECK_FALSE(rep.ok());
  bool saw_bijection = false;
  for (const auto& v : rep.violations)
    saw_bijection = saw_bijection || v.kind == ViolationKind::SquareBijection ||
                    v.kind == ViolationKind::SquareCoherence;
  CHECK(saw_bijection);
}

TEST_CASE("square map step and identity") {
  GbdSkeleton s = dyadic_fixture(2);
  for (size_t e = 0; e < s.edges.size(); ++e) {
    CHECK(factorisation_step(s, static_cast<int>(e), 0) == static_cast<int>(e));
    long long o = order_of_edge(s, static_cast<int>(e));
    CHECK(factorisation_step(s, static_cast<int>(e), o) == static_cast<int>(e));
  }
}

TEST_CASE("dyadic edge orders double per level") {
  GbdSkeleton s = dyadic_fixture(3);
  for (size_t e = 0; e < s.edges.size(); ++e) {
    int n = s.edges[e].level;
    CHECK(order_of_edge(s, static_cast<int>(e)) == (2LL << n));
  }
}

TEST_CASE("singleton block between length-1 cycles has order 1") {
  LevelData d;
  d.c = {1, 1};
  d.T = {IntMat::identity(1), IntMat::identity(1)};
  d.A = {IntMat{{1}}};
  d.B = {IntMat{{1}}};
  GbdSkeleton s = build_from_data(d);
  REQUIRE(s.edges.size() == 1);
  CHECK(order_of_edge(s, 0) == 1);
}

TEST_CASE("order of a path with edge orders 2 and 3 is 6") {
  // two stacked blocks between length-1 cycles: parallel edges cycled fully
  PermutationSystem sys;
  sys.sizes = {{Int(1)}, {Int(2)}, {Int(6)}};
  sys.blocks.resize(2);
  sys.blocks[0].push_back({0, 0, Perm::cycle(2)});
  sys.blocks[1].push_back({0, 0, Perm::cycle(3)});
  GbdSkeleton s = build_from_permutations(sys);
  REQUIRE(validate_gbd(s).ok());
  BluePath p;
  p.anchor = {0, 0, 0};
  p.edges = {s.block(0, 0, 0)[0], s.block(1, 0, 0)[0]};
  REQUIRE(path_composable(s, p));
  CHECK(order_of_path(s, p) == 6);
  CHECK(order_by_whole_path_iteration(s, p) == 6);
}

TEST_CASE("lcm law on random diagrams") {
  Rng rng(20240811);
  int paths_checked = 0;
  while (paths_checked < 1000) {
    GbdSkeleton s = random_gbd(rng, RandomGbdOptions{3, 2, 3, 2});
    for (int t = 0; t < 10 && paths_checked < 1000; ++t) {
      BluePath p = random_path(rng, s);
      if (p.edges.empty()) continue;
      Int via_lcm = order_of_path(s, p);
      long long via_iter = order_by_whole_path_iteration(s, p);
      CHECK(via_lcm == Int(via_iter));
      ++paths_checked;
    }
  }
}

TEST_CASE("square coherence and permutation closure on random diagrams") {
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    GbdSkeleton s = random_gbd(rng);
    REQUIRE_MESSAGE(validate_gbd(s).ok(), validate_gbd(s).summary());
    for (size_t e = 0; e < s.edges.size(); ++e) {
      const BlueEdge& cur = s.edges[e];
      const BlueEdge& nxt = s.edges[s.fsucc[e]];
      CHECK(nxt.range() == s.red_step(cur.range()));
      CHECK(nxt.source() == s.red_step(cur.source()));
    }
  }
}

TEST_CASE("red conjugation preserves order; cycle length divides edge order") {
  Rng rng(99);
  for (int t = 0; t < 15; ++t) {
    GbdSkeleton s = random_gbd(rng);
    for (size_t e = 0; e < s.edges.size(); ++e) {
      long long o = order_of_edge(s, static_cast<int>(e));
      long long len = s.cycle_length(s.edges[e].level, s.edges[e].range_cycle);
      CHECK(o % len == 0);
      long long k = rng.uniform(0, 12);
      CHECK(order_of_edge(s, factorisation_step(s, static_cast<int>(e), k)) == o);
    }
    for (int t2 = 0; t2 < 5; ++t2) {
      BluePath p = random_path(rng, s);
      Int o = order_of_path(s, p);
      CHECK(order_of_path(s, apply_factorisation(s, p, rng.uniform(0, 9))) == o);
    }
  }
}

TEST_CASE("path enumeration: dyadic counts and determinism") {
  GbdSkeleton s = dyadic_fixture(3);
  auto x2 = enumerate_blue_paths(s, 0, 2, 0);
  CHECK(x2.size() == 4);  // |X_{2,1}| = 4
  auto again = enumerate_blue_paths(s, 0, 2, 0);
  CHECK(x2 == again);
  for (size_t i = 1; i < x2.size(); ++i) CHECK(x2[i - 1] < x2[i]);
  // every enumerated path is composable with the right endpoints
  for (const auto& p : x2) {
    CHECK(path_composable(s, p));
    CHECK(p.anchor.level == 0);
    Vertex src = path_source(s, p);
    CHECK(src.level == 2);
    CHECK(src.cycle == 0);
  }
}

TEST_CASE("length-0 paths are the vertices; Y dominates the cycle") {
  GbdSkeleton s = dyadic_fixture(2);
  auto trivial = enumerate_blue_paths(s, 2, 2, 0);
  CHECK(trivial.size() == 4);  // the vertices themselves
  for (const auto& p : trivial) CHECK(p.edges.empty());
  // |Y_{n,j}| >= |V_{n,j}|
  size_t y = 0;
  for (int m = 0; m <= 2; ++m) y += enumerate_blue_paths(s, m, 2, 0).size();
  CHECK(y >= 4);
}

TEST_CASE("enumeration rejects levels beyond the truncation") {
  GbdSkeleton s = dyadic_fixture(2);
  CHECK_THROWS_AS(enumerate_blue_paths(s, 0, 5, 0), Error);
}

TEST_CASE("the dyadic level-0 edge pair is swapped by one square step") {
  GbdSkeleton s = dyadic_fixture(2);
  const auto& blk = s.block(0, 0, 0);
  REQUIRE(blk.size() == 2);
  CHECK(factorisation_step(s, blk[0], 1) == blk[1]);
  CHECK(factorisation_step(s, blk[1], 1) == blk[0]);
}

TEST_CASE("enumerated path counts match the incidence recursion") {
  Rng rng(616);
  for (int t = 0; t < 10; ++t) {
    GbdSkeleton s = random_gbd(rng, RandomGbdOptions{3, 2, 3, 2});
    LevelData d = extract_data(s);
    std::vector<Int> x;
    for (int j = 0; j < d.c[0]; ++j) x.push_back(d.t_entry(0, j));
    for (int n = 1; n <= s.depth(); ++n) {
      x = d.A[n - 1].apply(x);
      for (int j = 0; j < d.c[n]; ++j)
        CHECK(Int(static_cast<long long>(enumerate_blue_paths(s, 0, n, j).size())) == x[j]);
    }
  }
}

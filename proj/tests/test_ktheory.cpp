#include "doctest.h"

#include "gbd/ktheory.hpp"
#include "support.hpp"

using namespace gbd;
using namespace testsupport;

namespace {

LimitGroup golden_k0() { return LimitGroup(Family::irrational_rotation({1}), KGroup::K0); }
LimitGroup dyadic_k0() { return LimitGroup(Family::bunce_deddens({2}), KGroup::K0); }
LimitGroup dyadic_k1() { return LimitGroup(Family::bunce_deddens({2}), KGroup::K1); }

}  // namespace

TEST_CASE("push: golden step and identity") {
  LimitGroup g = golden_k0();
  LimitElement e{0, {Int(1), Int(0)}};
  LimitElement p = push(g, e, 1);
  CHECK(p.vec == std::vector<Int>{1, 1});
  CHECK(push(g, e, 0).vec == e.vec);
  // dyadic K1 pushes are constant
  LimitGroup k1 = dyadic_k1();
  LimitElement u{0, {Int(1)}};
  for (int n = 1; n <= 6; ++n) CHECK(push(k1, u, n).vec == std::vector<Int>{1});
}

TEST_CASE("push composes") {
  Rng rng(8);
  LimitGroup g = golden_k0();
  for (int t = 0; t < 50; ++t) {
    LimitElement e{0, {Int(rng.uniform(-5, 5)), Int(rng.uniform(-5, 5))}};
    int m = static_cast<int>(rng.uniform(0, 4));
    int k = static_cast<int>(rng.uniform(m, 6));
    LimitElement once = push(g, e, k);
    LimitElement twice = push(g, push(g, e, m), k);
    CHECK(once.vec == twice.vec);
    CHECK(once.level == twice.level);
  }
}

TEST_CASE("equal: golden examples") {
  LimitGroup g = golden_k0();
  LimitElement a{0, {Int(1), Int(0)}};
  LimitElement b{1, {Int(1), Int(1)}};
  CHECK(equal(g, a, b, 12).proven());

  LimitElement c{0, {Int(0), Int(1)}};
  Verdict uneq = equal(g, a, c, 12);
  CHECK(uneq.refuted());
  CHECK(uneq.certificate.find("injective") != std::string::npos);

  CHECK(equal(g, a, a, 12).proven());
}

TEST_CASE("equal is compatible with addition on proven outcomes") {
  LimitGroup g = golden_k0();
  LimitElement a{0, {Int(1), Int(0)}};
  LimitElement b{1, {Int(1), Int(1)}};  // equal to a
  LimitElement c{0, {Int(2), Int(-1)}};
  LimitElement apc{0, {a.vec[0] + c.vec[0], a.vec[1] + c.vec[1]}};
  LimitElement pc = push(g, c, 1);
  LimitElement bpc{1, {b.vec[0] + pc.vec[0], b.vec[1] + pc.vec[1]}};
  CHECK(equal(g, apc, bpc, 12).proven());
}

TEST_CASE("positive: unit class, zero, and sign stabilisation") {
  LimitGroup g = golden_k0();
  PositivityVerdict unit = positive(g, unit_class(g), 12);
  CHECK(unit.verdict.proven());
  CHECK(unit.sign == Sign::Positive);

  LimitElement zero{0, {Int(0), Int(0)}};
  PositivityVerdict z = positive(g, zero, 12);
  CHECK(z.sign == Sign::Zero);

  LimitElement mixed{0, {Int(1), Int(-1)}};
  PositivityVerdict m = positive(g, mixed, 12);
  CHECK(m.verdict.proven());
  CHECK(m.sign == Sign::Positive);

  LimitElement neg{0, {Int(-1), Int(1)}};
  PositivityVerdict nv = positive(g, neg, 12);
  CHECK(nv.verdict.refuted());
  CHECK(nv.sign == Sign::Negative);
}

TEST_CASE("positivity cone is closed under addition (samples)") {
  Rng rng(4242);
  LimitGroup g = golden_k0();
  int done = 0;
  while (done < 40) {
    LimitElement a{0, {Int(rng.uniform(-3, 5)), Int(rng.uniform(-3, 5))}};
    LimitElement b{0, {Int(rng.uniform(-3, 5)), Int(rng.uniform(-3, 5))}};
    if (positive(g, a, 12).sign != Sign::Positive) continue;
    if (positive(g, b, 12).sign != Sign::Positive) continue;
    LimitElement sum{0, {a.vec[0] + b.vec[0], a.vec[1] + b.vec[1]}};
    Sign s = positive(g, sum, 12).sign;
    CHECK((s == Sign::Positive || s == Sign::Zero));
    ++done;
  }
}

TEST_CASE("unit class is an order unit in the cofinal examples") {
  Rng rng(99);
  LimitGroup g = golden_k0();
  LimitElement u = unit_class(g);
  for (int t = 0; t < 25; ++t) {
    LimitElement e{0, {Int(rng.uniform(-4, 4)), Int(rng.uniform(-4, 4))}};
    bool dominated = false;
    for (Int k = 1; k <= 64 && !dominated; k *= 2) {
      LimitElement diff{0, {k * u.vec[0] - e.vec[0], k * u.vec[1] - e.vec[1]}};
      Sign s = positive(g, diff, 12).sign;
      dominated = (s == Sign::Positive || s == Sign::Zero);
    }
    CHECK(dominated);
  }
}

TEST_CASE("unit class and dimension range on the dyadic tower") {
  GbdSkeleton s = dyadic_fixture(3);
  LimitGroup g = dyadic_k0();
  LimitElement u = unit_class(g);
  CHECK(u.level == 0);
  CHECK(u.vec == std::vector<Int>{1});

  DimensionRangeVerdict m0 = dimension_range_member(g, u, s, 8);
  CHECK(m0.verdict.proven());

  // three units fit once the path count reaches 3: at level 2, |Y| = 12
  CHECK(y_count(s, 2, 0) == 12);
  LimitElement three{0, {Int(3)}};
  DimensionRangeVerdict m3 = dimension_range_member(g, three, s, 8);
  CHECK(m3.verdict.proven());
  REQUIRE(m3.witness_level.has_value());
  CHECK(*m3.witness_level == 2);

  // a negative class is never a projection class
  LimitElement neg{0, {Int(-1)}};
  CHECK_FALSE(dimension_range_member(g, neg, s, 3).verdict.proven());
}

TEST_CASE("torsion witness: dyadic, identity-T, golden") {
  LimitGroup g = dyadic_k0();
  LimitElement e{2, {Int(1)}};
  TorsionWitness w = torsion_quotient_witness(g, e);
  CHECK(w.t == 4);
  CHECK(w.p == std::vector<Int>{1});
  // the witness chain: A_n T_n = T_{n+1} B_n at the element's level
  const LevelData& d = g.data_up_to(3);
  CHECK(d.A[2] * d.T[2] == d.T[3] * d.B[2]);

  LimitGroup gl = golden_k0();
  LimitElement x{1, {Int(3), Int(-2)}};
  TorsionWitness wl = torsion_quotient_witness(gl, x);
  CHECK(wl.t == 1);
  CHECK(wl.p == x.vec);
}

TEST_CASE("torsion witness divisibility on random dyadic elements") {
  Rng rng(31337);
  LimitGroup g = dyadic_k0();
  for (int t = 0; t < 100; ++t) {
    int level = static_cast<int>(rng.uniform(0, 6));
    LimitElement e{level, {Int(rng.uniform(-50, 50))}};
    TorsionWitness w = torsion_quotient_witness(g, e);
    CHECK(w.t == Int(1) << level);
    CHECK(w.t * e.vec[0] == (Int(1) << level) * w.p[0]);
  }
}

TEST_CASE("ideal lattice: cofinal truncation is trivial among persistent ideals") {
  LevelData d = extract_data(dyadic_fixture(3));
  IdealLattice lat = order_ideal_lattice(d, 3);
  int persistent = 0;
  for (const auto& i : lat.ideals)
    if (i.persistent) ++persistent;
  CHECK(persistent == 2);  // empty and everything
}

TEST_CASE("ideal lattice: two disjoint chains give a 4-element Boolean lattice") {
  LevelData d;
  d.c = {2, 2, 2};
  d.T = {IntMat::identity(2), IntMat::identity(2), IntMat::identity(2)};
  d.A = {IntMat{{1, 0}, {0, 1}}, IntMat{{1, 0}, {0, 1}}};
  d.B = d.A;
  IdealLattice lat = order_ideal_lattice(d, 2);
  CHECK(lat.ideals.size() == 4);
  for (const auto& i : lat.ideals) CHECK(i.persistent);
  for (const auto& a : lat.ideals)
    for (const auto& b : lat.ideals) {
      CHECK(lat.find(ideal_meet(d, a, b).markers) != nullptr);
      CHECK(lat.find(ideal_join(d, a, b).markers) != nullptr);
    }
}

TEST_CASE("ideal lattice generators are unit vectors of member cycles") {
  LevelData d;
  d.c = {3, 3};
  d.T = {IntMat::identity(3), IntMat::identity(3)};
  d.A = {IntMat{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
  d.B = d.A;
  IdealLattice lat = order_ideal_lattice(d, 1);
  for (const auto& ideal : lat.ideals)
    for (const LimitElement& g : ideal_generators(d, ideal)) {
      Int sum = 0;
      for (const Int& v : g.vec) sum += v;
      CHECK(sum == 1);
    }
  CHECK(lat.ideals.size() >= 4);
}

TEST_CASE("equal falls back to evidence when maps lose injectivity") {
  LevelData d;
  d.c = {2, 2, 2};
  d.T = {IntMat::identity(2), IntMat::identity(2), IntMat::identity(2)};
  d.A = {IntMat{{1, 1}, {1, 1}}, IntMat{{1, 1}, {1, 1}}};
  d.B = d.A;
  LimitGroup g(Family::periodic_data(d, 1), KGroup::K0);
  LimitElement a{0, {Int(1), Int(0)}};
  LimitElement b{0, {Int(0), Int(1)}};
  // (1,0) and (0,1) map to the same vector: equal in the limit
  CHECK(equal(g, a, b, 8).proven());
  // but (1,0) vs (2,0) never meet and injectivity cannot be certified
  LimitElement c{0, {Int(2), Int(0)}};
  Verdict v = equal(g, a, c, 8);
  CHECK(v.status == Status::Evidence);
}

TEST_CASE("ideal lattices are distributive on the small fixtures") {
  std::vector<LevelData> fixtures;
  {
    LevelData d;
    d.c = {2, 2, 2};
    d.T = {IntMat::identity(2), IntMat::identity(2), IntMat::identity(2)};
    d.A = {IntMat{{1, 0}, {0, 1}}, IntMat{{1, 0}, {0, 1}}};
    d.B = d.A;
    fixtures.push_back(d);
  }
  {
    LevelData d;
    d.c = {3, 3};
    d.T = {IntMat::identity(3), IntMat::identity(3)};
    d.A = {IntMat{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
    d.B = d.A;
    fixtures.push_back(d);
  }
  for (const LevelData& d : fixtures) {
    IdealLattice lat = order_ideal_lattice(d, d.depth());
    for (const auto& a : lat.ideals)
      for (const auto& b : lat.ideals)
        for (const auto& c : lat.ideals) {
          OrderIdeal lhs = ideal_meet(d, a, ideal_join(d, b, c));
          OrderIdeal rhs = ideal_join(d, ideal_meet(d, a, b), ideal_meet(d, a, c));
          CHECK(lhs.markers == rhs.markers);
        }
  }
}

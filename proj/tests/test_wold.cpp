#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "isocalc/constructions.hpp"
#include "isocalc/wold.hpp"

using namespace isocalc;

namespace {

Operator from_pieces(std::vector<AffinePiece> ps) {
  return Operator::from_injection(PartialInjection::unchecked(std::move(ps)));
}

Operator shift(std::int64_t k) {
  return from_pieces({AffinePiece{IndexSet::all(), AffineMap(1, k)}});
}

}  // namespace

TEST_CASE("pure shift") {
  WoldResult w = wold_decompose(shift(1));
  CHECK(w.unitary_part.is_empty());
  CHECK(w.shift_part.is_all());
  CHECK(w.wandering == IndexSet::finite({0}));
  CHECK(w.multiplicity.finite);
  CHECK(w.multiplicity.count == 1);
  CHECK(w.certificate == Tier::Exact);
}

TEST_CASE("identity is all unitary part") {
  WoldResult w = wold_decompose(Operator::identity());
  CHECK(w.unitary_part.is_all());
  CHECK(w.shift_part.is_empty());
  CHECK(w.multiplicity.finite);
  CHECK(w.multiplicity.count == 0);
  CHECK(w.certificate == Tier::Exact);
}

TEST_CASE("mixed fixed point plus shift") {
  // f(0)=0, f(i)=i+1 for i>=1
  Operator a = from_pieces(
      {AffinePiece{IndexSet::finite({0}), AffineMap::identity()},
       AffinePiece{IndexSet::from_at_least(1), AffineMap(1, 1)}});
  WoldResult w = wold_decompose(a);
  CHECK(w.unitary_part == IndexSet::finite({0}));
  CHECK(w.wandering == IndexSet::finite({1}));
  CHECK(w.multiplicity.count == 1);
  CHECK(w.certificate == Tier::Exact);
}

TEST_CASE("finite cycles are unitary part") {
  // swap {0,1}, shift {i>=2} by 2: cycle + shift with wandering {2,3}
  Operator a = from_pieces(
      {AffinePiece{IndexSet::finite({0}), AffineMap(1, 1)},
       AffinePiece{IndexSet::finite({1}), AffineMap(1, -1)},
       AffinePiece{IndexSet::from_at_least(2), AffineMap(1, 2)}});
  WoldResult w = wold_decompose(a);
  CHECK(w.unitary_part == IndexSet::finite({0, 1}));
  CHECK(w.wandering == IndexSet::finite({2, 3}));
  CHECK(w.multiplicity.count == 2);
  CHECK(w.certificate == Tier::Exact);
}

TEST_CASE("multiplicity of standard examples") {
  Cardinality s0 = multiplicity(make_cuntz(2)[0]);
  CHECK_FALSE(s0.finite);  // wandering = odds
  Cardinality three = multiplicity(shift(3));
  CHECK(three.finite);
  CHECK(three.count == 3);
  Operator swap = from_pieces(
      {AffinePiece{IndexSet::residue_class(2, 0), AffineMap(1, 1)},
       AffinePiece{IndexSet::residue_class(2, 1), AffineMap(1, -1)}});
  Cardinality zero = multiplicity(swap);
  CHECK(zero.finite);
  CHECK(zero.count == 0);
}

TEST_CASE("unitary part is invariant and wandering is orthogonal to its image") {
  std::vector<Operator> corpus{
      shift(1), shift(4), make_cuntz(2)[0], make_cuntz(3)[2],
      from_pieces({AffinePiece{IndexSet::finite({0}), AffineMap::identity()},
                   AffinePiece{IndexSet::from_at_least(1), AffineMap(1, 3)}}),
      from_pieces({AffinePiece{IndexSet::residue_class(3, 0), AffineMap(1, 1)},
                   AffinePiece{IndexSet::residue_class(3, 1), AffineMap(1, 1)},
                   AffinePiece{IndexSet::residue_class(3, 2), AffineMap(1, -2)}})};
  for (const Operator& a : corpus) {
    WoldResult w = wold_decompose(a);
    PartialInjection f = a.basis_map();
    CHECK(w.unitary_part.set_union(w.shift_part).is_all());
    CHECK(w.unitary_part.set_intersection(w.shift_part).is_empty());
    CHECK(w.wandering == f.image().complement());
    CHECK(w.wandering.set_intersection(f.image_of(w.wandering)).is_empty());
    if (w.certificate == Tier::Exact)
      CHECK(f.image_of(w.unitary_part) == w.unitary_part);
    Cardinality card = w.wandering.cardinality();
    CHECK(card.finite == w.multiplicity.finite);
    if (card.finite) CHECK(card.count == w.multiplicity.count);
  }
}

TEST_CASE("last pieces pump upward: periodic unitary part") {
  // f = +1 on residue 0 mod 2, -1 on residue 1 mod 2 above 2, with low
  // indices shifted into the tail: a pure permutation by adjacent swaps
  Operator a = from_pieces(
      {AffinePiece{IndexSet::residue_class(2, 0), AffineMap(1, 1)},
       AffinePiece{IndexSet::residue_class(2, 1), AffineMap(1, -1)}});
  WoldResult w = wold_decompose(a);
  CHECK(w.unitary_part.is_all());
  CHECK(w.certificate == Tier::Exact);
}

TEST_CASE("scalar multiples decompose like the underlying map") {
  Operator a = Coefficient(Rational(2, 3), Rational(1, 3)) * shift(2);
  WoldResult w = wold_decompose(a);
  CHECK(w.wandering == IndexSet::finite({0, 1}));
  CHECK_THROWS_AS(wold_decompose(shift(1) + shift(2)), std::invalid_argument);
  CHECK_THROWS_AS(wold_decompose(Operator::zero()), std::invalid_argument);
}

TEST_CASE("round trip with constructions") {
  // finite wandering sets
  std::vector<IndexSet> finite_ms{IndexSet::finite({0}), IndexSet::finite({5}),
                                  IndexSet::finite({0, 1, 2}),
                                  IndexSet::finite({1, 4, 6, 7})};
  for (const IndexSet& m : finite_ms) {
    WoldResult w = wold_decompose(make_shift_with_wandering(m));
    CHECK(w.unitary_part.is_empty());
    CHECK(w.wandering == m);
    CHECK(w.certificate == Tier::Exact);
  }
  // residue-class wandering sets go through the prefix tier
  for (Nat mod = 2; mod <= 4; ++mod) {
    IndexSet m = IndexSet::residue_class(mod, mod - 1);
    WoldResult w = wold_decompose(make_shift_with_wandering(m, 2048), 2048);
    CHECK(w.certificate == Tier::Prefix);
    CHECK(w.unitary_part.is_empty());
    CHECK(w.wandering == m);
    CHECK_FALSE(w.multiplicity.finite);
  }
}

TEST_CASE("prefix wold flags non-basis-map inputs") {
  PrefixEvaluator ev;
  ev.bound = 64;
  ev.column = [](Nat i) {
    return std::vector<Entry>{{2 * i, Coefficient(1)}, {2 * i + 1, Coefficient(1)}};
  };
  CHECK_THROWS_AS(wold_decompose(Operator::prefix(ev), 64),
                  std::invalid_argument);
}

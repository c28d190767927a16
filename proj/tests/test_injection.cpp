#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "isocalc/injection.hpp"

using namespace isocalc;

namespace {

PartialInjection total(std::int64_t a, std::int64_t b) {
  return PartialInjection::unchecked(
      {AffinePiece{IndexSet::all(), AffineMap(a, b)}});
}

PartialInjection random_injection(std::mt19937& rng) {
  // disjoint residue classes mod m mapped by distinct shifts/stretches
  std::uniform_int_distribution<Nat> mod_d(1, 4);
  std::uniform_int_distribution<std::int64_t> b_d(0, 5);
  Nat m = mod_d(rng);
  std::vector<AffinePiece> pieces;
  for (Nat r = 0; r < m; ++r)
    pieces.push_back(AffinePiece{IndexSet::residue_class(m, r),
                                 AffineMap(m + 1, b_d(rng) * (m + 1) + r)});
  return PartialInjection::unchecked(pieces);
}

}  // namespace

TEST_CASE("composition of total affine maps") {
  // substitution: (2i) o (2i+1) = 4i+2
  CHECK(total(2, 0).compose(total(2, 1)) == total(4, 2));
  CHECK(total(1, 1).compose(total(1, 1)) == total(1, 2));
  // odd outputs never divisible by two
  CHECK(total(2, 0).inverse().compose(total(2, 1)).is_empty());
}

TEST_CASE("inversion") {
  PartialInjection s0 = total(2, 0);
  PartialInjection inv = s0.inverse();
  CHECK(inv.domain() == IndexSet::residue_class(2, 0));
  CHECK(inv.apply(6) == Nat{3});
  CHECK_FALSE(inv.apply(3).has_value());

  PartialInjection s3 = total(1, 3);
  CHECK(s3.inverse().domain() == IndexSet::from_at_least(3));
  CHECK(s3.inverse().apply(5) == Nat{2});

  std::mt19937 rng(99);
  for (int t = 0; t < 50; ++t) {
    PartialInjection p = random_injection(rng);
    CHECK(p.inverse().inverse() == p);
  }
}

TEST_CASE("validation rejects clashes with witnesses") {
  auto v = PartialInjection::validate(
      {AffinePiece{IndexSet::all(), AffineMap(2, 0)},
       AffinePiece{IndexSet::all(), AffineMap(2, 0)}});
  auto* viol = std::get_if<InjectionViolation>(&v);
  REQUIRE(viol != nullptr);
  CHECK(viol->witness == 0);

  auto ok = PartialInjection::validate(
      {AffinePiece{IndexSet::residue_class(2, 0), AffineMap(1, 1)},
       AffinePiece{IndexSet::residue_class(2, 1), AffineMap(1, -1)}});
  auto* swap = std::get_if<PartialInjection>(&ok);
  REQUIRE(swap != nullptr);
  CHECK(swap->is_bijection_on(IndexSet::all()));

  CHECK(std::holds_alternative<PartialInjection>(
      PartialInjection::validate({AffinePiece{IndexSet::all(), AffineMap(2, 0)}})));
}

TEST_CASE("canonical forms identify equal maps") {
  // i -> i+1 presented whole and split by parity
  PartialInjection whole = total(1, 1);
  PartialInjection split = PartialInjection::unchecked(
      {AffinePiece{IndexSet::residue_class(2, 0), AffineMap(1, 1)},
       AffinePiece{IndexSet::residue_class(2, 1), AffineMap(1, 1)}});
  CHECK(whole == split);
}

TEST_CASE("pointwise composition agrees with symbolic composition") {
  std::mt19937 rng(3);
  for (int t = 0; t < 50; ++t) {
    PartialInjection p = random_injection(rng), q = random_injection(rng);
    PartialInjection pq = p.compose(q);
    for (Nat i = 0; i < 64; ++i) {
      auto qi = q.apply(i);
      std::optional<Nat> expect = qi ? p.apply(*qi) : std::optional<Nat>{};
      CHECK(pq.apply(i) == expect);
    }
  }
}

TEST_CASE("image_of and enumeration") {
  CHECK(total(2, 1).image_of(IndexSet::all()) == IndexSet::residue_class(2, 1));
  PartialInjection en = enumeration_injection(IndexSet::residue_class(3, 1));
  CHECK(en.domain() == IndexSet::all());
  for (Nat k = 0; k < 40; ++k) CHECK(en.apply(k) == Nat{3 * k + 1});
}

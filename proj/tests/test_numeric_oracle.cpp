#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "isocalc/constructions.hpp"
#include "isocalc/mi_space.hpp"
#include "isocalc/numeric_oracle.hpp"

using namespace isocalc;

namespace {

Operator shift(std::int64_t k) {
  return Operator::from_injection(PartialInjection::unchecked(
      {AffinePiece{IndexSet::all(), AffineMap(1, k)}}));
}

}  // namespace

TEST_CASE("truncate") {
  Truncation ts = truncate(shift(1), 4);
  CHECK(ts.safe_columns == std::vector<Nat>{0, 1, 2});
  for (Nat i = 0; i < 3; ++i) CHECK(ts.matrix(i + 1, i) == 1.0);
  CHECK(ts.matrix(0, 0) == 0.0);

  Truncation t0 = truncate(make_cuntz(2)[0], 8);
  CHECK(t0.safe_columns == std::vector<Nat>{0, 1, 2, 3});
  for (Nat i = 0; i <= 3; ++i) CHECK(t0.matrix(2 * i, i) == 1.0);

  CHECK(truncate(Operator::zero(), 4).matrix.isZero());
  CHECK_THROWS_AS(truncate(shift(1), 0), std::invalid_argument);
}

TEST_CASE("norm estimates") {
  CHECK(norm_estimate(truncate(Operator::identity(), 16)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  Operator a = Coefficient(2) * make_cuntz(2)[0] + make_cuntz(2)[1];
  CHECK(norm_estimate(truncate(a, 512)) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
  Operator c = commutator(make_cuntz(2)[0], make_cuntz(2)[1]);
  CHECK(norm_estimate(truncate(c, 64)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(norm2_estimate(truncate(Operator::zero(), 8)) == 0.0);
}

TEST_CASE("norm squared converges to the exact inner product") {
  std::mt19937 rng(111);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9), pick(0, 1);
  auto fam = make_cuntz(2);
  for (int t = 0; t < 10; ++t) {
    Operator a = Coefficient(Rational(num(rng), den(rng)),
                             Rational(num(rng), den(rng))) *
                     fam[pick(rng)] +
                 Coefficient(Rational(num(rng), den(rng))) * fam[pick(rng)];
    InnerProductResult ip = inner_product(a, a);
    REQUIRE(ip.scalar);
    double exact = to_double(ip.value.re);
    double est2 = norm2_estimate(truncate(a, 512));
    CHECK(est2 == doctest::Approx(exact).epsilon(1e-9));
    // compressions are contractive
    CHECK(est2 <= exact + 1e-9);
  }
}

TEST_CASE("cross validation") {
  Operator s0 = make_cuntz(2)[0], s1 = make_cuntz(2)[1];
  CrossValidation id = cross_validate(s0.adjoint(), s0, 64);
  CHECK(id.agreed);
  CHECK(id.columns_compared > 0);
  Operator a = Coefficient(2) * s0 + s1;
  CHECK(cross_validate(a.adjoint(), a, 64).agreed);
  CHECK(cross_validate(shift(1), shift(1), 8).agreed);

  // dyadic coefficients convert to float exactly, so the products must
  // match bit for bit on safe columns
  std::mt19937 rng(131);
  std::uniform_int_distribution<int> num(-8, 8), pick(0, 2);
  for (int t = 0; t < 50; ++t) {
    auto fam = make_cuntz(2 + t % 2);
    Operator x = Coefficient(Rational(num(rng), 2)) *
                     fam[pick(rng) % fam.size()] +
                 Coefficient(0, 1) * fam[pick(rng) % fam.size()];
    Operator y = Coefficient(num(rng)) * fam[pick(rng) % fam.size()].adjoint();
    CrossValidation cv = cross_validate(x, y, 128);
    CHECK(cv.max_abs_diff == 0.0);
  }
}

TEST_CASE("csv dump") {
  std::string csv = to_csv(truncate(shift(1), 3));
  CHECK(csv == "1,0,1,0\n2,1,1,0\n");
}

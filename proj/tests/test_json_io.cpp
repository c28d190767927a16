#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "isocalc/constructions.hpp"
#include "isocalc/json_io.hpp"
#include "isocalc/wold.hpp"

using namespace isocalc;
using nlohmann::json;

namespace {

Operator shift(std::int64_t k) {
  return Operator::from_injection(PartialInjection::unchecked(
      {AffinePiece{IndexSet::all(), AffineMap(1, k)}}));
}

}  // namespace

TEST_CASE("index set round trip") {
  std::vector<IndexSet> sets{
      IndexSet::empty(), IndexSet::all(), IndexSet::finite({3, 7, 8}),
      IndexSet::residue_class(3, 1).set_difference(IndexSet::finite({1})),
      IndexSet::from_at_least(5)};
  for (const IndexSet& s : sets) CHECK(parse_index_set(to_json(s)) == s);
  // finite sets travel as mod=1, res=[], plus=[...]
  json f = to_json(IndexSet::finite({2, 4}));
  CHECK(f["mod"] == 1);
  CHECK(f["res"].empty());
  CHECK(f["plus"] == json::array({2, 4}));
  // non-canonical input canonicalizes on parse
  json raw{{"mod", 4}, {"res", {0, 2}}, {"plus", json::array()},
           {"minus", json::array()}};
  CHECK(parse_index_set(raw) == IndexSet::residue_class(2, 0));
}

TEST_CASE("index set parse errors carry locations") {
  CHECK_THROWS_AS(parse_index_set(json{{"res", json::array()}}), JsonError);
  try {
    parse_index_set(json{{"mod", 2}, {"res", {5}}, {"plus", json::array()},
                         {"minus", json::array()}},
                    "/arg");
    FAIL("expected JsonError");
  } catch (const JsonError& e) {
    CHECK(e.location == "/arg/res");
  }
  CHECK_THROWS_AS(
      parse_index_set(json{{"mod", 0}, {"res", json::array()},
                           {"plus", json::array()}, {"minus", json::array()}}),
      JsonError);
}

TEST_CASE("operator round trip") {
  std::vector<Operator> ops{
      Operator::zero(),
      Operator::identity(),
      shift(1),
      Coefficient(Rational(2, 3), Rational(-1, 5)) * make_cuntz(3)[1],
      Coefficient(2) * make_cuntz(2)[0] + Coefficient(0, 1) * make_cuntz(2)[1],
      make_cuntz(2)[0].adjoint(),  // exercises the "c" denominator field
      make_shift_with_wandering(IndexSet::finite({1, 4, 5}))};
  for (const Operator& a : ops) CHECK(parse_operator(to_json(a)) == a);
}

TEST_CASE("operator parsing validates structure") {
  // empty terms list is the zero operator
  CHECK(parse_operator(json::parse(R"({"terms":[]})")).is_zero());
  // rationals must be decimal-free strings
  CHECK_THROWS_AS(parse_operator(json::parse(
                      R"({"terms":[{"coeff":{"re":0.5,"im":"0"},
                          "map":{"pieces":[]}}]})")),
                  JsonError);
  CHECK_THROWS_AS(parse_operator(json::parse(
                      R"({"terms":[{"coeff":{"re":"1/2.5","im":"0"},
                          "map":{"pieces":[]}}]})")),
                  JsonError);
  // overlapping images are rejected with a located witness
  json dup = json::parse(R"({"terms":[{"coeff":{"re":"1","im":"0"},
      "map":{"pieces":[
        {"domain":{"mod":1,"res":[0],"plus":[],"minus":[]},"a":2,"b":0},
        {"domain":{"mod":1,"res":[0],"plus":[],"minus":[]},"a":2,"b":0}]}}]})");
  try {
    parse_operator(dup);
    FAIL("expected JsonError");
  } catch (const JsonError& e) {
    CHECK(e.location == "/terms/0/map");
  }
  // maps must stay inside the naturals on their domain
  json neg = json::parse(R"({"terms":[{"coeff":{"re":"1","im":"0"},
      "map":{"pieces":[
        {"domain":{"mod":1,"res":[0],"plus":[],"minus":[]},"a":1,"b":-1}]}}]})");
  CHECK_THROWS_AS(parse_operator(neg), JsonError);
}

TEST_CASE("prefix operators serialize their certified table") {
  Operator a = make_shift_with_wandering(IndexSet::residue_class(2, 0), 64);
  json j = to_json(a);
  CHECK(j["tier"] == "prefix");
  CHECK(j["bound"] == 64);
  CHECK(j["columns"].size() == 64);
  Operator back = parse_operator(j);
  CHECK(back.tier() == Tier::Prefix);
  for (Nat i = 0; i < 64; ++i) {
    auto x = a.apply(i), y = back.apply(i);
    REQUIRE(x.size() == y.size());
    for (size_t k = 0; k < x.size(); ++k) {
      CHECK(x[k].row == y[k].row);
      CHECK(x[k].coeff == y[k].coeff);
    }
  }
}

TEST_CASE("wold and gram reports") {
  WoldResult w = wold_decompose(shift(2));
  json jw = to_json(w);
  CHECK(jw["multiplicity"] == 2);
  CHECK(jw["certificate"] == "exact");
  CHECK(parse_index_set(jw["wandering"]) == IndexSet::finite({0, 1}));

  WoldResult wp = wold_decompose(
      make_shift_with_wandering(IndexSet::residue_class(2, 0), 256), 256);
  json jp = to_json(wp);
  CHECK(jp["multiplicity"] == "inf");
  CHECK(jp["certificate"]["prefix"] == 256);

  GramReport ok = check_mi_space(make_cuntz(2));
  json jg = to_json(ok);
  CHECK(jg["verdict"] == "MI-OK");
  CHECK(jg["dimension"] == 2);
  CHECK(jg["gram"][0][0]["re"] == "1");
  GramReport bad = check_mi_space({shift(1), shift(1) * shift(1)});
  json jb = to_json(bad);
  CHECK(jb["verdict"] == "MI-VIOLATION");
  CHECK(jb["violation"]["witness"] == 0);
}

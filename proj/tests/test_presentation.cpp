#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "presets.hpp"
#include "zetaforge/presentation.hpp"

using namespace zetaforge;

namespace {
MPoly P(const std::string& s) { return MPoly::parse(s); }
}

TEST_CASE("parsing presentations") {
  Presentation heis = presets::heisenberg();
  CHECK(heis.d == 2);
  CHECK(heis.dprime == 1);
  CHECK(heis.entry_poly(0, 1) == P("y_1"));
  CHECK(heis.entry_poly(1, 0) == P("y_1").negated());
  CHECK(heis.entry_poly(0, 0).is_zero());
  CHECK(heis.warnings.empty());

  Presentation g3 = presets::grenham(3);
  CHECK(g3.d == 3);
  CHECK(g3.dprime == 2);
  CHECK(g3.entry_poly(0, 2) == P("y_1"));
  CHECK(g3.entry_poly(1, 2) == P("y_2"));

  CHECK_THROWS_AS(parse_presentation(std::string(
                      R"({"d":2,"dprime":1,"entries":[{"i":1,"j":1,"form":[2]}]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_presentation(std::string(
          R"({"d":2,"dprime":1,"entries":[{"i":1,"j":2,"form":[1]},
                                           {"i":2,"j":1,"form":[1]}]})")),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_presentation(std::string(R"({"d":2})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_presentation(std::string(
                      R"({"d":2,"dprime":2,"entries":[{"i":1,"j":2,"form":[1]}]})")),
                  std::invalid_argument);

  Presentation padded = parse_presentation(std::string(
      R"({"d":2,"dprime":2,"entries":[{"i":1,"j":2,"form":[1,0]}]})"));
  REQUIRE(padded.warnings.size() == 1);
}

TEST_CASE("serialization round-trips") {
  for (const Presentation& pres :
       {presets::heisenberg(), presets::gaussian_heisenberg(),
        presets::grenham(4), presets::free_class2_rank4()}) {
    Presentation back = parse_presentation(serialize_presentation(pres));
    CHECK(back.d == pres.d);
    CHECK(back.dprime == pres.dprime);
    CHECK(back.M == pres.M);
    CHECK(serialize_presentation(back) == serialize_presentation(pres));
  }
}

TEST_CASE("pfaffians") {
  CHECK(pfaffian(presets::heisenberg()) == P("y_1"));
  CHECK(pfaffian(presets::gaussian_heisenberg()) == P("y_1^2 + y_2^2"));
  CHECK(pfaffian(presets::free_class2_rank4()) == presets::klein_quadric());
  // odd d: no Pfaffian
  CHECK(pfaffian(presets::grenham(3)).is_zero());
  // rank-deficient even d: determinant vanishes identically
  CHECK(pfaffian(presets::grenham(4)).is_zero());
}

TEST_CASE("pfaffian squares to the determinant on random presentations") {
  std::mt19937 rng(5150);
  std::uniform_int_distribution<long long> coef(-3, 3);
  for (int trial = 0; trial < 12; ++trial) {
    int d = (trial % 2 == 0) ? 4 : 6;
    int dprime = 2 + trial % 3;
    nlohmann::json doc;
    doc["d"] = d;
    doc["dprime"] = dprime;
    nlohmann::json entries = nlohmann::json::array();
    for (int i = 1; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j) {
        std::vector<long long> form(static_cast<size_t>(dprime));
        for (auto& c : form) c = coef(rng);
        entries.push_back({{"i", i}, {"j", j}, {"form", form}});
      }
    doc["entries"] = entries;
    Presentation pres = parse_presentation(doc);
    // pfaffian() checks Pf^2 == det internally and throws on mismatch
    CHECK_NOTHROW(pfaffian(pres));
  }
}

TEST_CASE("group invariants") {
  GroupInvariants inv = group_invariants(presets::gaussian_heisenberg());
  CHECK(inv.has_hypersurface);
  CHECK(inv.pfaffian_degree == 2);
  CHECK_FALSE(group_invariants(presets::grenham(3)).has_hypersurface);
}

TEST_CASE("hypothesis reports") {
  HypothesisReport heis = hypothesis_report(presets::heisenberg(), 3);
  CHECK(heis.pf_nonzero);
  CHECK(heis.smooth_vacuous);
  CHECK(heis.lines_vacuous);
  CHECK(heis.n_points == 0);
  CHECK(heis.irreducible_over_Q == "unchecked");
  CHECK(heis.good_reduction == true);

  HypothesisReport g3 = hypothesis_report(presets::gaussian_heisenberg(), 3);
  CHECK(g3.smooth_mod_p == true);
  CHECK(g3.line_free_mod_p == true);
  CHECK(g3.n_points == 0);
  CHECK(g3.good_reduction == true);

  HypothesisReport g5 =
      hypothesis_report(presets::gaussian_heisenberg(), 5, true);
  CHECK(g5.smooth_mod_p == true);
  CHECK(g5.n_points == 2);
  CHECK(g5.irreducible_over_Q == "asserted");

  HypothesisReport g2 = hypothesis_report(presets::gaussian_heisenberg(), 2);
  CHECK(g2.smooth_mod_p == false);
  CHECK(g2.good_reduction == false);

  HypothesisReport f24 = hypothesis_report(presets::free_class2_rank4(), 2);
  CHECK(f24.smooth_mod_p == true);
  CHECK(f24.line_free_mod_p == false);  // quadric fourfold carries lines
  CHECK(f24.n_points == 35);
}

TEST_CASE("hypothesis report degrades to unchecked fields on a tiny budget") {
  HypothesisReport rep =
      hypothesis_report(presets::free_class2_rank4(), 3, false, 10);
  CHECK(rep.pf_nonzero);
  CHECK_FALSE(rep.n_points.has_value());
  CHECK_FALSE(rep.smooth_mod_p.has_value());
  CHECK_FALSE(rep.good_reduction.has_value());
  CHECK(rep.notes.size() >= 2);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "flowknot/expansion.hpp"

using namespace flowknot;
using diagram::EmbeddingStage;
using expansion::EmbeddedExpansion;
using expansion::FlowExpansion;
using fpgroup::GroupWord;
using symbolic::Substitution;
using symbolic::Word;

namespace {

GroupWord gen(int g) { return GroupWord::generator(g); }

template <class F>
std::string thrown(F&& f) {
  try {
    f();
  } catch (const invalid_input& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& msg, const std::string& frag) {
  return msg.find(frag) != std::string::npos;
}

std::vector<int> trace_arcs(const diagram::LoopTrace& t) {
  std::vector<int> arcs;
  for (const diagram::TraceStep& s : t) arcs.push_back(s.arc);
  return arcs;
}

}  // namespace

TEST_CASE("expansion validation") {
  CHECK(mentions(thrown([] { expansion::validate(FlowExpansion{{}, {}, 0}); }),
                 "at least one stage"));
  CHECK(mentions(thrown([] { expansion::validate(FlowExpansion{{1, 1}, {}, 0}); }),
                 "exactly one bonding"));
  CHECK(mentions(thrown([] { expansion::validate(FlowExpansion{{0}, {}, 0}); }),
                 "rank must be >= 1"));
  CHECK(mentions(thrown([] {
                   expansion::validate(
                       FlowExpansion{{1, 1}, {Substitution::square(2, {{0}, {1}})}, 0});
                 }),
                 "domain does not match"));
  CHECK(mentions(thrown([] {
                   expansion::validate(FlowExpansion{
                       {1, 2}, {Substitution::square(2, {{0}, {1}})}, 0});
                 }),
                 "codomain does not match"));
  CHECK(mentions(thrown([] {
                   expansion::validate(
                       FlowExpansion{{1, 1}, {Substitution::square(1, {{0, 0}})}, 2});
                 }),
                 "tail period out of range"));
  // A tail can only repeat if the ranks wrap consistently.
  CHECK(mentions(thrown([] {
                   expansion::validate(FlowExpansion{
                       {1, 2},
                       {Substitution(symbolic::Alphabet(2), symbolic::Alphabet(1), {{0, 0}, {0}})},
                       1});
                 }),
                 "rank mismatch at the wrap"));
}

TEST_CASE("bonding lookup unrolls the periodic tail") {
  const EmbeddedExpansion e = expansion::sturmian_expansion(symbolic::SturmianParams({1, 2}));
  CHECK(expansion::bonding_at(e.base, 0).image(0) == Word{0, 0, 1});
  CHECK(expansion::bonding_at(e.base, 1).image(0) == Word{0, 0, 0, 1});
  CHECK(expansion::bonding_at(e.base, 5).image(0) == Word{0, 0, 0, 1});
  CHECK(expansion::rank_at(e.base, 0) == 2);
  CHECK(expansion::rank_at(e.base, 9) == 2);

  FlowExpansion finite{{1, 1}, {Substitution::square(1, {{0, 0}})}, 0};
  expansion::validate(finite);
  CHECK_NOTHROW(expansion::bonding_at(finite, 0));
  CHECK(mentions(thrown([&] { expansion::bonding_at(finite, 1); }), "no periodic tail"));
}

TEST_CASE("canonical stages order traces by phase along the flow") {
  // sigma_2: 0 -> 0001, 1 -> 001. Circle passes through hole 0 interleave by
  // fractional position, not block by block.
  const EmbeddingStage s2 = expansion::canonical_stage(symbolic::sturmian_substitution(2));
  CHECK(s2.name == "canonical");
  CHECK(s2.diagram.crossings.empty());
  CHECK(s2.diagram.arcNames == std::vector<std::string>{"c0", "c1"});
  CHECK(trace_arcs(s2.traces[0]) == std::vector<int>{0, 1, 0, 1, 0});
  CHECK(trace_arcs(s2.traces[1]) == std::vector<int>{1, 0});

  const EmbeddingStage fib = expansion::canonical_stage(Substitution::square(2, {{0, 0, 1}, {0, 1}}));
  CHECK(trace_arcs(fib.traces[0]) == std::vector<int>{0, 1, 0});
  CHECK(trace_arcs(fib.traces[1]) == std::vector<int>{1, 0});

  // Crossing-free stages present free complements, and the canonical stage
  // always satisfies duality against the substitution it realizes.
  CHECK(diagram::wirtinger(s2.diagram).is_free());
  for (int n = 1; n <= 5; ++n) {
    const auto st = expansion::canonical_stage(symbolic::sturmian_substitution(n));
    CHECK(diagram::duality_check(st, symbolic::sturmian_substitution(n)));
  }
}

TEST_CASE("embedded expansion validation") {
  EmbeddedExpansion e = expansion::builtin_expansion("fibonacci_unknotted");
  e.stages.push_back(std::nullopt);
  CHECK(mentions(thrown([&] { expansion::validate(e); }), "more embedded stages"));

  EmbeddedExpansion wrongStage = expansion::builtin_expansion("fibonacci_unknotted");
  wrongStage.stages[0] = diagram::builtin_fixture("dyadic_unknotted");
  CHECK(mentions(thrown([&] { expansion::validate(wrongStage); }), "loop count"));

  EmbeddedExpansion wrongSub = expansion::builtin_expansion("fibonacci_unknotted");
  wrongSub.stages[0] = diagram::builtin_fixture("thue_morse_simplified");
  CHECK(mentions(thrown([&] { expansion::validate(wrongSub); }), "different substitution"));
}

TEST_CASE("builtin expansions bundle one repeating stage") {
  for (const std::string& n : expansion::builtin_expansion_names()) {
    const EmbeddedExpansion e = expansion::builtin_expansion(n);
    CHECK(e.base.tailPeriod == 1);
    CHECK(e.base.bondings.size() == 1);
    CHECK(expansion::stage_at(e, 0).name == n);
    CHECK(expansion::stage_at(e, 7).name == n);  // the tail reuses the stage
  }
  CHECK(expansion::builtin_expansion("dyadic_unknotted").base.ranks == std::vector<int>{1, 1});
  CHECK(expansion::builtin_expansion("fibonacci_unknotted").base.ranks == std::vector<int>{2, 2});
  // Without a recorded stage the canonical embedding fills in.
  const EmbeddedExpansion st = expansion::sturmian_expansion(symbolic::SturmianParams({1, 2, 3}));
  CHECK(st.base.ranks == std::vector<int>{2, 2, 2, 2});
  CHECK(expansion::stage_at(st, 1).name == "canonical");
}

TEST_CASE("knot group systems by depth") {
  const EmbeddedExpansion fib = expansion::builtin_expansion("fibonacci_unknotted");

  const auto sys0 = expansion::knot_group_system(fib, 0);
  CHECK(sys0.groups.size() == 1);
  CHECK(sys0.maps.empty());
  CHECK(sys0.groups[0].is_free());
  CHECK(sys0.groups[0].rank == 2);
  CHECK(sys0.groups[0].names == std::vector<std::string>{"t0", "t1"});

  const auto sys2 = expansion::knot_group_system(fib, 2);
  REQUIRE(sys2.groups.size() == 3);
  REQUIRE(sys2.maps.size() == 2);
  CHECK(sys2.groups[1].rank == 3);
  CHECK(sys2.maps[0].images[0] == gen(0) * gen(1) * gen(2));
  CHECK(sys2.maps[0].images[1] == gen(1) * gen(2));
  // Deeper maps send each arc generator to the trace of its loop.
  CHECK(sys2.maps[1].images[0] == gen(0) * gen(1) * gen(2));
  CHECK(sys2.maps[1].images[1] == gen(0) * gen(1) * gen(2));
  CHECK(sys2.maps[1].images[2] == gen(1) * gen(2));

  CHECK_THROWS_AS(expansion::knot_group_system(fib, -1), invalid_input);

  // Canonically embedded stages have free complements, so every map verifies.
  const auto sys = expansion::knot_group_system(
      expansion::sturmian_expansion(symbolic::SturmianParams({1, 2, 3})), 3);
  CHECK(sys.groups.size() == 4);
  for (const auto& g : sys.groups) CHECK(g.is_free());
  for (const auto& m : sys.maps) CHECK(m.verified);
}

TEST_CASE("freeness certificates") {
  using expansion::UnknottedCertificate;
  auto verdict_of = [](const std::string& name, int depth) {
    return expansion::unknotted_certificate(
        expansion::knot_group_system(expansion::builtin_expansion(name), depth));
  };

  const auto fib = verdict_of("fibonacci_unknotted", 3);
  CHECK(fib.verdict == UnknottedCertificate::Verdict::certifiedAllFree);
  CHECK(fib.stage == -1);
  CHECK(mentions(fib.reason, "free"));

  CHECK(verdict_of("dyadic_unknotted", 4).verdict == UnknottedCertificate::Verdict::certifiedAllFree);
  CHECK(verdict_of("thue_morse_simplified", 3).verdict ==
        UnknottedCertificate::Verdict::certifiedAllFree);

  const auto tre = verdict_of("dyadic_trefoil", 2);
  CHECK(tre.verdict == UnknottedCertificate::Verdict::notFree);
  CHECK(tre.stage == 1);
  CHECK(mentions(tre.reason, "maps to S3"));

  const auto ftre = verdict_of("fibonacci_trefoil", 1);
  CHECK(ftre.verdict == UnknottedCertificate::Verdict::notFree);
  CHECK(mentions(ftre.reason, "maps to S3"));

  // Depth zero leaves only the outer free group.
  CHECK(verdict_of("dyadic_trefoil", 0).verdict == UnknottedCertificate::Verdict::certifiedAllFree);

  // Torsion in first homology is reported directly.
  fpgroup::DirectSystem torsion;
  torsion.groups = {fpgroup::GroupPresentation(1, {GroupWord::from_steps({{0, 5}})})};
  const auto t = expansion::unknotted_certificate(torsion);
  CHECK(t.verdict == UnknottedCertificate::Verdict::notFree);
  CHECK(mentions(t.reason, "torsion"));

  // Too many generators to brute force and nothing simplifies: stay honest.
  fpgroup::DirectSystem wide;
  wide.groups = {fpgroup::GroupPresentation(7, {gen(0) * gen(1) * gen(0).inverse() * gen(1).inverse()})};
  const auto w = expansion::unknotted_certificate(wide);
  CHECK(w.verdict == UnknottedCertificate::Verdict::inconclusive);
  CHECK(mentions(w.reason, "did not simplify"));
}

TEST_CASE("stable knot groups") {
  const auto fib = expansion::stable_knot_group(
      expansion::knot_group_system(expansion::builtin_expansion("fibonacci_unknotted"), 3));
  REQUIRE(fib.stage.has_value());
  CHECK(*fib.stage == 0);
  CHECK(fib.group->is_free());
  CHECK(fib.group->rank == 2);
  CHECK(fib.mapIsFreeAutomorphism == std::vector<bool>{true, true, true});
  CHECK(mentions(fib.note, "stage 0"));

  // Doubling the single dyadic circle is injective but not onto: no stage
  // stabilizes.
  const auto dy = expansion::stable_knot_group(
      expansion::knot_group_system(expansion::builtin_expansion("dyadic_unknotted"), 3));
  CHECK(!dy.stage.has_value());
  CHECK(dy.mapIsFreeAutomorphism == std::vector<bool>{false, false, false});
  CHECK(mentions(dy.note, "no terminal run"));

  // Relator-bearing stages never rewrite to automorphisms.
  const auto tre = expansion::stable_knot_group(
      expansion::knot_group_system(expansion::builtin_expansion("dyadic_trefoil"), 2));
  CHECK(!tre.stage.has_value());

  // Both Thue-Morse traces rewrite to the same word: rank collapses, no
  // automorphism.
  const auto tm = expansion::stable_knot_group(
      expansion::knot_group_system(expansion::builtin_expansion("thue_morse_simplified"), 2));
  CHECK(!tm.stage.has_value());

  const auto stu = expansion::stable_knot_group(
      expansion::knot_group_system(expansion::sturmian_expansion(symbolic::SturmianParams({1, 2, 3})), 3));
  REQUIRE(stu.stage.has_value());
  CHECK(*stu.stage == 0);
  CHECK(stu.group->rank == 2);
}

TEST_CASE("image ranks along the system") {
  auto first_map_rank = [](const std::string& name) {
    const auto sys = expansion::knot_group_system(expansion::builtin_expansion(name), 1);
    return fpgroup::stable_image_rank(sys, 0).rank;
  };
  CHECK(first_map_rank("dyadic_unknotted") == 1);
  CHECK(first_map_rank("fibonacci_unknotted") == 2);
  CHECK(first_map_rank("thue_morse_simplified") == 1);  // both traces collapse to one word
  CHECK(first_map_rank("dyadic_trefoil") == 1);
}

TEST_CASE("cech h1 of the dyadic solenoid complement") {
  const auto e = expansion::builtin_expansion("dyadic_unknotted").base;
  const auto h = expansion::cech_h1(e, 5);
  CHECK(h.rankOne);
  CHECK(h.windings == std::vector<long long>{2, 2, 2, 2, 2});
  CHECK(h.colimit.group_str() == "Z[1/2]");
  CHECK(h.colimit.depth == 5);
  CHECK(h.dets == std::vector<bigint>{2, 2, 2, 2, 2});
  CHECK(h.stableRank == 1);
  CHECK(mentions(h.note, "Z[1/2]"));

  // Any sampling depth covering the tail reports the same limit group.
  CHECK(expansion::cech_h1(e, 1).colimit.group_str() == "Z[1/2]");
  CHECK(expansion::cech_h1(e, 3).colimit.primes == h.colimit.primes);

  const auto h0 = expansion::cech_h1(e, 0);
  CHECK(h0.maps.empty());
  CHECK(h0.windings.empty());
  CHECK(h0.stableRank == 1);
  CHECK(h0.colimit.group_str() == "Z");

  CHECK_THROWS_AS(expansion::cech_h1(e, -1), invalid_input);
}

TEST_CASE("cech h1 in rank two") {
  const auto fib = expansion::cech_h1(expansion::builtin_expansion("fibonacci_unknotted").base, 3);
  CHECK(!fib.rankOne);
  CHECK(fib.maps.size() == 3);
  CHECK(fib.maps[0] == IntMatrix::from_rows({{2, 1}, {1, 1}}));
  CHECK(fib.dets == std::vector<bigint>{1, 1, 1});
  CHECK(fib.stableRank == 2);
  CHECK(mentions(fib.note, "rank 2"));

  const auto tm = expansion::cech_h1(expansion::builtin_expansion("thue_morse_simplified").base, 4);
  CHECK(tm.maps[0] == IntMatrix::from_rows({{1, 1}, {1, 1}}));
  CHECK(tm.dets == std::vector<bigint>{0, 0, 0, 0});
  CHECK(tm.stableRank == 1);  // the composite collapses to a line

  const auto stu = expansion::cech_h1(
      expansion::sturmian_expansion(symbolic::SturmianParams({1, 2, 3})).base, 3);
  CHECK(stu.maps[0] == IntMatrix::from_rows({{2, 1}, {1, 1}}));
  CHECK(stu.maps[1] == IntMatrix::from_rows({{3, 1}, {2, 1}}));
  CHECK(stu.maps[2] == IntMatrix::from_rows({{4, 1}, {3, 1}}));
  IntMatrix composite = stu.maps[2] * stu.maps[1] * stu.maps[0];
  CHECK(composite == IntMatrix::from_rows({{33, 19}, {26, 15}}));
  CHECK(stu.dets == std::vector<bigint>{1, 1, 1});
  CHECK(stu.stableRank == 2);

  // Non-square steps report no determinants but still a composite rank.
  FlowExpansion collapse{
      {1, 2}, {Substitution(symbolic::Alphabet(2), symbolic::Alphabet(1), {{0, 0}, {0}})}, 0};
  const auto c = expansion::cech_h1(collapse, 1);
  CHECK(c.dets.empty());
  CHECK(c.maps[0].rows() == 2);
  CHECK(c.maps[0].cols() == 1);
  CHECK(c.stableRank == 1);
  CHECK(!c.rankOne);
}

TEST_CASE("embedded stages with equal homology are interchangeable") {
  const auto dyU = diagram::builtin_fixture("dyadic_unknotted");
  const auto dyT = diagram::builtin_fixture("dyadic_trefoil");
  CHECK(expansion::embedding_independent(dyU, dyT));
  CHECK(expansion::embedding_independent(dyU, expansion::canonical_stage(*dyU.bonding)));
  const auto fibU = diagram::builtin_fixture("fibonacci_unknotted");
  const auto fibT = diagram::builtin_fixture("fibonacci_trefoil");
  CHECK(!expansion::embedding_independent(fibU, fibT));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "flowknot/symbolic.hpp"

using namespace flowknot;
using symbolic::Alphabet;
using symbolic::Letter;
using symbolic::Substitution;
using symbolic::Word;

namespace {

Word W(const std::string& digits) { return symbolic::word_from_digits(digits); }

// Iterate a square substitution on the letter 0 until the prefix reaches n.
Word orbit_prefix(const Substitution& s, std::size_t n) {
  Word w{0};
  while (w.size() < n) w = s.apply(w);
  w.resize(n);
  return w;
}

const Substitution kFib = Substitution::square(2, {W("010"), W("01")});

}  // namespace

TEST_CASE("alphabet bounds") {
  CHECK_THROWS_AS(Alphabet(0), invalid_input);
  CHECK_THROWS_AS(Alphabet(256), invalid_input);
  CHECK(Alphabet(1).size() == 1);
  CHECK(Alphabet(255).size() == 255);
}

TEST_CASE("word parsing and printing") {
  CHECK(symbolic::word_str(W("0102")) == "0102");
  CHECK(W("") == Word{});
  CHECK_THROWS_AS(symbolic::word_from_digits("01a"), invalid_input);
  const Word big{Letter(11), Letter(3)};
  CHECK(symbolic::word_str(big) == "[11,3]");
  CHECK_THROWS_AS(symbolic::check_word(W("02"), Alphabet(2), "w"), invalid_input);
  CHECK_NOTHROW(symbolic::check_word(W("0110"), Alphabet(2), "w"));
}

TEST_CASE("substitution construction rejects bad shapes") {
  CHECK_THROWS_AS(Substitution::square(2, {W("01")}), invalid_input);
  CHECK_THROWS_AS(Substitution::square(2, {W("01"), Word{}}), invalid_input);
  CHECK_THROWS_AS(Substitution::square(2, {W("01"), W("02")}), invalid_input);
  const Substitution s = Substitution(Alphabet(2), Alphabet(3), {W("012"), W("2")});
  CHECK_FALSE(s.is_square());
  CHECK(s.image(1) == W("2"));
  CHECK_THROWS_AS(s.image(2), invalid_input);
}

TEST_CASE("apply and compose") {
  CHECK(kFib.apply(W("0")) == W("010"));
  CHECK(kFib.apply(W("01")) == W("01001"));
  const Substitution s1 = symbolic::sturmian_substitution(1);
  const Substitution s11 = symbolic::compose(s1, s1);
  CHECK(s11.image(0) == W("00100101"));
  CHECK(s11.image(1) == W("00101"));
  // compose(a, b) applies b first: (a . b)(x) = a(b(x))
  const Substitution s2 = symbolic::sturmian_substitution(2);
  CHECK(symbolic::compose(s2, s1).image(0) == s2.apply(s1.image(0)));
  CHECK_THROWS_AS(symbolic::compose(Substitution(Alphabet(3), Alphabet(2), {W("0"), W("1"), W("01")}),
                                    Substitution(Alphabet(2), Alphabet(2), {W("0"), W("1")})),
                  invalid_input);
}

TEST_CASE("sturmian substitutions and transition matrices") {
  CHECK_THROWS_AS(symbolic::sturmian_substitution(0), invalid_input);
  const Substitution s1 = symbolic::sturmian_substitution(1);
  CHECK(s1.image(0) == W("001"));
  CHECK(s1.image(1) == W("01"));
  for (int n = 1; n <= 5; ++n) {
    const Substitution s = symbolic::sturmian_substitution(n);
    const IntMatrix m = transition_matrix(s);
    CHECK(m.at(0, 0) == n + 1);
    CHECK(m.at(0, 1) == n);
    CHECK(m.at(1, 0) == 1);
    CHECK(m.at(1, 1) == 1);
    CHECK(determinant(m) == 1);
  }
}

TEST_CASE("composed parameter run [1,2,3]") {
  Substitution acc = symbolic::sturmian_substitution(1);
  acc = symbolic::compose(acc, symbolic::sturmian_substitution(2));
  acc = symbolic::compose(acc, symbolic::sturmian_substitution(3));
  CHECK(symbolic::word_str(acc.image(0)) ==
        "0010010010100100100101001001001010010010010100100101");
  CHECK(symbolic::word_str(acc.image(1)) == "00100100101001001001010010010010100100101");
  const IntMatrix m = transition_matrix(acc);
  CHECK(m == IntMatrix::from_rows({{33, 26}, {19, 15}}));
  CHECK(determinant(m) == 1);
}

TEST_CASE("transition matrix of a non-square substitution") {
  // domain 2 letters, codomain 3: columns indexed by domain
  const Substitution s(Alphabet(2), Alphabet(3), {W("0212"), W("1")});
  const IntMatrix m = transition_matrix(s);
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 2);
  CHECK(m == IntMatrix::from_rows({{1, 0}, {1, 1}, {2, 0}}));
}

TEST_CASE("sturmian parameter lists") {
  CHECK_THROWS_AS(symbolic::SturmianParams({}), invalid_input);
  CHECK_THROWS_AS(symbolic::SturmianParams({1, 0}), invalid_input);
  const symbolic::SturmianParams p({3, 1, 4});
  CHECK(p.at(0) == 3);
  CHECK(p.at(2) == 4);
  CHECK(p.at(17) == 4);  // final entry repeats
}

TEST_CASE("tail equivalence is last-entry equality") {
  using symbolic::SturmianParams;
  using symbolic::tails_equivalent;
  CHECK(tails_equivalent(SturmianParams({1, 1, 1}), SturmianParams({2, 1, 1})));
  CHECK_FALSE(tails_equivalent(SturmianParams({1, 1, 1}), SturmianParams({2, 2, 2})));
  CHECK(tails_equivalent(SturmianParams({7, 3}), SturmianParams({3})));

  // equivalence-relation laws on random samples
  std::mt19937_64 rng(20240817);
  std::uniform_int_distribution<int> entry(1, 4), len(1, 4);
  auto sample = [&] {
    std::vector<int> e(std::size_t(len(rng)));
    for (int& x : e) x = entry(rng);
    return SturmianParams(e);
  };
  for (int i = 0; i < 50; ++i) {
    const SturmianParams a = sample(), b = sample(), c = sample();
    CHECK(tails_equivalent(a, a));
    CHECK(tails_equivalent(a, b) == tails_equivalent(b, a));
    if (tails_equivalent(a, b) && tails_equivalent(b, c)) CHECK(tails_equivalent(a, c));
  }
}

TEST_CASE("cyclic relabel") {
  CHECK(symbolic::cyclic_relabel(W("0102"), 1, Alphabet(3)) == W("1210"));
  CHECK(symbolic::cyclic_relabel(W("0102"), 3, Alphabet(3)) == W("0102"));
  CHECK(symbolic::cyclic_relabel(W("0102"), -1, Alphabet(3)) == W("2021"));
  CHECK(symbolic::cyclic_relabel(W("01"), 1, Alphabet(2)) == W("10"));
}

TEST_CASE("sigma_w pinned images") {
  const symbolic::SigmaEmbedding e01 = symbolic::sigma_w(W("01"), Alphabet(2));
  CHECK(e01.mu == 2);
  CHECK(e01.sub.image(0) == W("000100"));
  CHECK(e01.sub.image(1) == W("001000"));

  const symbolic::SigmaEmbedding e0 = symbolic::sigma_w(W("0"), Alphabet(2));
  CHECK(e0.mu == 2);
  CHECK(e0.sub.image(0) == W("00000"));
  CHECK(e0.sub.image(1) == W("00100"));

  const symbolic::SigmaEmbedding e3 = symbolic::sigma_w(W("0102"), Alphabet(3));
  CHECK(e3.mu == 3);
  CHECK(e3.sub.image(0) == W("0000102000"));
  CHECK(e3.sub.image(1) == W("0001210000"));
  CHECK(e3.sub.image(2) == W("0002021000"));

  CHECK_THROWS_AS(symbolic::sigma_w(Word{}, Alphabet(2)), invalid_input);
  CHECK_THROWS_AS(symbolic::sigma_w(W("02"), Alphabet(2)), invalid_input);
}

TEST_CASE("sigma_w images: uniform length, pairwise distinct, exhaustive to length 6") {
  const Alphabet two(2);
  for (int len = 1; len <= 6; ++len) {
    for (int bits = 0; bits < (1 << len); ++bits) {
      Word w;
      for (int i = 0; i < len; ++i) w.push_back(Letter((bits >> i) & 1));
      const symbolic::SigmaEmbedding e = symbolic::sigma_w(w, two);
      int maxCount = 0;
      for (int x = 0; x < 2; ++x)
        maxCount = std::max(maxCount, int(std::count(w.begin(), w.end(), Letter(x))));
      CHECK(e.mu == 1 + maxCount);
      for (const Word& im : e.sub.images()) CHECK(int(im.size()) == 2 * e.mu + len);
      CHECK_FALSE(e.sub.image(0) == e.sub.image(1));
    }
  }
}

TEST_CASE("sigma_w images distinct on a bigger alphabet (random probe)") {
  std::mt19937_64 rng(987654321);
  const Alphabet a(4);
  std::uniform_int_distribution<int> letter(0, 3), len(1, 8);
  for (int t = 0; t < 100; ++t) {
    Word w(std::size_t(len(rng)));
    for (Letter& x : w) x = Letter(letter(rng));
    const symbolic::SigmaEmbedding e = symbolic::sigma_w(w, a);
    std::set<Word> seen(e.sub.images().begin(), e.sub.images().end());
    CHECK(seen.size() == 4);
    for (const Word& im : e.sub.images()) CHECK(im.size() == w.size() + 2 * std::size_t(e.mu));
  }
}

TEST_CASE("relabel power") {
  CHECK(symbolic::relabel_power_for(W("0100"), Alphabet(2)) == 0);
  CHECK(symbolic::relabel_power_for(W("111"), Alphabet(2)) == 1);
  CHECK(symbolic::relabel_power_for(W("22"), Alphabet(3)) == 1);
  CHECK(symbolic::relabel_power_for(W("12"), Alphabet(3)) == 1);
  CHECK_THROWS_AS(symbolic::relabel_power_for(Word{}, Alphabet(2)), invalid_input);
}

TEST_CASE("factor containment") {
  CHECK(symbolic::contains_factor(W("010010"), W("100")));
  CHECK_FALSE(symbolic::contains_factor(W("010010"), W("11")));
  CHECK(symbolic::contains_factor(W("01"), Word{}));
}

TEST_CASE("density witnesses on the fibonacci orbit prefix") {
  const Word orbit = orbit_prefix(kFib, 40);
  CHECK(symbolic::word_str(orbit) == "0100101001001010010100100101001001010010");
  const Alphabet two(2);

  auto witness = [&](const std::string& target, int maxLen) {
    return symbolic::density_witness(W(target), orbit, two, maxLen);
  };

  auto r = witness("01", 6);
  REQUIRE(r.has_value());
  CHECK(symbolic::word_str(r->w) == "0");
  CHECK(r->mu == 2);

  r = witness("11", 6);
  REQUIRE(r.has_value());
  CHECK(symbolic::word_str(r->w) == "00");
  CHECK(r->mu == 3);

  r = witness("0000", 6);
  REQUIRE(r.has_value());
  CHECK(symbolic::word_str(r->w) == "0");

  r = witness("10010", 6);
  REQUIRE(r.has_value());
  CHECK(symbolic::word_str(r->w) == "0110");
  CHECK(r->mu == 3);

  r = witness("11111", 6);
  REQUIRE(r.has_value());
  CHECK(symbolic::word_str(r->w) == "00000");
  CHECK(r->mu == 6);

  r = witness("10101", 6);
  REQUIRE(r.has_value());
  CHECK(symbolic::word_str(r->w) == "01010");
  CHECK(r->mu == 4);

  // A target needing five adjacent 1s is out of reach for 2-letter seeds.
  CHECK_FALSE(witness("11111111", 2).has_value());

  CHECK_THROWS_AS(witness("", 6), invalid_input);
  CHECK_THROWS_AS(witness("01", 0), invalid_input);
  CHECK_THROWS_AS(symbolic::density_witness(W("01"), Word{}, two, 3), invalid_input);
}

TEST_CASE("density witness on a three-letter orbit") {
  const Word orbit = W("0102010");
  const auto r = symbolic::density_witness(W("21"), orbit, Alphabet(3), 4);
  REQUIRE(r.has_value());
  CHECK(r->w == W("02"));
  CHECK(r->mu == 2);
}

TEST_CASE("every density witness actually witnesses") {
  // the returned embedding's image of the orbit must contain the target
  const Word orbit = orbit_prefix(kFib, 60);
  const Alphabet two(2);
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> bit(0, 1), len(1, 5);
  for (int t = 0; t < 40; ++t) {
    Word target(std::size_t(len(rng)));
    for (Letter& x : target) x = Letter(bit(rng));
    const auto r = symbolic::density_witness(target, orbit, two, 6);
    REQUIRE(r.has_value());
    CHECK(symbolic::contains_factor(r->sub.apply(orbit), target));
  }
}

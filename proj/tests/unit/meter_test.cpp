#include <gtest/gtest.h>

#include "pdp/meter.hpp"

namespace pdp::meter {
namespace {

const Wordlist& fixture() {
  static const Wordlist w = Wordlist::load(PDP_TEST_DATA_DIR "/wordlist.txt");
  return w;
}

TEST(Meter, FixtureLoads) {
  EXPECT_EQ(fixture().size(), 45u);
  EXPECT_TRUE(fixture().contains("rabbit"));
  EXPECT_FALSE(fixture().contains(""));
}

TEST(Meter, DictionaryAndConcatenation) {
  const Wordlist w({"rabbit", "bit"});
  const auto v = evaluate_rs("bit", "rab", w);
  EXPECT_EQ(v.strength, Strength::Weak);
  EXPECT_EQ(v.reasons, (std::vector<Reason>{Reason::DictionaryWord, Reason::ConcatenationMakesWord}));
}

TEST(Meter, ConcatenationEitherOrder) {
  const Wordlist w({"bitrab"});
  EXPECT_TRUE(evaluate_rs("bit", "rab", w).has(Reason::ConcatenationMakesWord));
  EXPECT_FALSE(evaluate_rs("bit", "rab", w).has(Reason::DictionaryWord));
}

TEST(Meter, DictionaryWordAlone) {
  const auto v = evaluate_rs("fox", "anything", fixture());
  EXPECT_EQ(v.strength, Strength::Weak);
  EXPECT_EQ(v.reasons, std::vector<Reason>{Reason::DictionaryWord});
}

TEST(Meter, StrongExample) {
  // q7e: not a word, street+q7e / q7e+street not words, no run, no repeat.
  const auto v = evaluate_rs("q7e", "street", fixture());
  EXPECT_EQ(v.strength, Strength::Strong);
  EXPECT_TRUE(v.reasons.empty());
  EXPECT_FALSE(v.weak());
}

TEST(Meter, SequentialPatterns) {
  EXPECT_EQ(evaluate_rs("abc", "x", Wordlist{}).reasons, std::vector<Reason>{Reason::SequentialPattern});
  for (auto s : {"cba", "xyz", "123", "987", "qwe", "ewq", "asd", "lkj", "zxc", "mnb", "890", "ab", "ba"}) {
    EXPECT_TRUE(is_sequential(s)) << s;
  }
  for (auto s : {"q7e", "ace", "aeb", "qw9", "pa1", "z01", "az", "qa"}) {
    EXPECT_FALSE(is_sequential(s)) << s;
  }
}

TEST(Meter, RepeatedCharacterAlwaysWeakAndBlocking) {
  const Wordlist w({"aa1"});
  for (auto [rs, pw] : {std::pair{"aa1", "pw"}, {"q7q", "street"}, {"zz", ""}}) {
    const auto v = evaluate_rs(rs, pw, w);
    EXPECT_EQ(v.strength, Strength::Weak);
    EXPECT_TRUE(v.has(Reason::RepeatedCharacter));
    EXPECT_TRUE(v.blocks_registration());
  }
  EXPECT_FALSE(evaluate_rs("fox", "", fixture()).blocks_registration());
}

TEST(Meter, Deterministic) {
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(evaluate_rs("bit", "rab", fixture()).reasons,
              evaluate_rs("bit", "rab", fixture()).reasons);
  }
}

TEST(Meter, WeakIffReasons) {
  for (auto rs : {"q7e", "fox", "abc", "aa1", "k2m"}) {
    const auto v = evaluate_rs(rs, "pw", fixture());
    EXPECT_EQ(v.strength == Strength::Weak, !v.reasons.empty()) << rs;
  }
}

}  // namespace
}  // namespace pdp::meter

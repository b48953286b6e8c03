#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdp/error.hpp"
#include "pdp/vault.hpp"
#include "test_support.hpp"

namespace pdp::vault {
namespace {

using testing::RecordingChecker;

const HoneyCircularList kCanonical = HoneyCircularList::canonical();

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Register, StoresChainAndSetsFirstChar) {
  RecordingChecker checker;
  Vault vault(kCanonical, checker);
  const auto reg = vault.register_user("alice", "street99", "adg");
  EXPECT_EQ(reg.record.chain.distances(), (std::vector<int>{3, 3}));
  EXPECT_EQ(reg.record.salt_hex.size(), 32u);
  EXPECT_EQ(reg.record.hash_hex.size(), 64u);
  EXPECT_EQ(checker.calls, std::vector<std::string>{"SET alice a"});
  EXPECT_EQ(checker.store.check("alice", 'a'), checker::Feedback::Pos);
  EXPECT_FALSE(reg.meter.has_value());
}

TEST(Register, WorkedExampleRing) {
  RecordingChecker checker;
  Vault vault(testing::fig3_hcl(), checker);
  const auto reg = vault.register_user("carol", "pw", "tp7");
  EXPECT_EQ(reg.record.chain.to_string(), "35-6");
  EXPECT_EQ(checker.calls, std::vector<std::string>{"SET carol t"});
}

TEST(Register, Rejections) {
  RecordingChecker checker;
  Vault vault(kCanonical, checker);
  EXPECT_THROW(vault.register_user("bob", "pw", "aa1"), ValidationError);
  EXPECT_THROW(vault.register_user("bob", "pw", "ab"), ValidationError);    // wrong length
  EXPECT_THROW(vault.register_user("bob", "pw", "abcd"), ValidationError);  // wrong length
  EXPECT_THROW(vault.register_user("bo:b", "pw", "adg"), ValidationError);
  EXPECT_THROW(vault.register_user("bo b", "pw", "adg"), ValidationError);
  EXPECT_THROW(vault.register_user("", "pw", "adg"), ValidationError);
  vault.register_user("bob", "pw", "adg");
  EXPECT_THROW(vault.register_user("bob", "other", "xyz"), ValidationError);
  EXPECT_EQ(vault.records().size(), 1u);
  EXPECT_EQ(checker.count_prefix("SET"), 1u);
}

TEST(Register, MeterIsWarnOnly) {
  RecordingChecker checker;
  const meter::Wordlist words({"fox"});
  Vault::Options o;
  o.wordlist = &words;
  Vault vault(kCanonical, checker, o);
  const auto reg = vault.register_user("u", "pw", "fox");
  ASSERT_TRUE(reg.meter.has_value());
  EXPECT_TRUE(reg.meter->weak());
  EXPECT_NE(vault.find("u"), nullptr);
}

TEST(Register, RecordHoldsNoRsCharacters) {
  RecordingChecker checker;
  Vault vault(kCanonical, checker);
  vault.register_user("u", "pw", "xq7");
  const auto line = vault.snapshot().serialize();
  const auto body = line.substr(line.find('\n') + 1);
  // Salt and hash are hex; 'x' and 'q' cannot appear there, and the chain is digits.
  EXPECT_EQ(body.find("xq7"), std::string::npos);
  EXPECT_EQ(body.find('x'), std::string::npos);
  EXPECT_EQ(body.find('q'), std::string::npos);
}

TEST(Login, Pipeline) {
  RecordingChecker checker;
  Vault vault(kCanonical, checker);
  vault.register_user("alice", "street99", "adg");
  checker.calls.clear();

  EXPECT_EQ(vault.login("alice", "street99", "adg").verdict, Verdict::Granted);
  EXPECT_EQ(vault.login("alice", "street99", "beh").verdict, Verdict::AlarmHoneyRS);
  EXPECT_EQ(vault.login("alice", "street99", "adh").verdict, Verdict::DeniedChainMismatch);
  EXPECT_EQ(vault.login("alice", "wrong", "adg").verdict, Verdict::DeniedWrongPassword);
  EXPECT_EQ(vault.login("alice", "wrong", "beh").verdict, Verdict::DeniedWrongPassword);
  EXPECT_EQ(checker.calls, (std::vector<std::string>{"CHECK alice a", "CHECK alice b"}));
}

TEST(Login, FeedbackAndAlarmLog) {
  RecordingChecker checker;
  Vault vault(kCanonical, checker);
  vault.register_user("alice", "street99", "adg");
  const auto ok = vault.login("alice", "street99", "adg");
  EXPECT_EQ(ok.feedback, checker::Feedback::Pos);
  EXPECT_TRUE(vault.alarms().empty());
  const auto alarm = vault.login("alice", "street99", "beh");
  EXPECT_EQ(alarm.feedback, checker::Feedback::Neg);
  ASSERT_EQ(vault.alarms().size(), 1u);
  EXPECT_EQ(vault.alarms().front().username, "alice");
  const auto denied = vault.login("alice", "street99", "adh");
  EXPECT_FALSE(denied.feedback.has_value());
  EXPECT_EQ(vault.chain_mismatches(), 1u);
  EXPECT_EQ(vault.alarms().size(), 1u);
}

TEST(Login, MalformedRsIsChainMismatch) {
  RecordingChecker checker;
  Vault vault(kCanonical, checker);
  vault.register_user("alice", "street99", "adg");
  checker.calls.clear();
  for (auto rs : {"", "a", "ad", "adgj", "ADG", "a#g", "aag"}) {
    EXPECT_EQ(vault.login("alice", "street99", rs).verdict, Verdict::DeniedChainMismatch) << rs;
  }
  EXPECT_TRUE(checker.calls.empty());
}

TEST(Login, UnknownUser) {
  RecordingChecker checker;
  Vault vault(kCanonical, checker);
  EXPECT_THROW(vault.login("nobody", "pw", "adg"), ValidationError);
}

TEST(Login, CheckerWithoutRecordIsAnError) {
  RecordingChecker checker;
  Vault vault(kCanonical, checker);
  vault.register_user("alice", "street99", "adg");
  checker.store.erase("alice");
  EXPECT_THROW(vault.login("alice", "street99", "adg"), Error);
}

TEST(VaultProperties, RegisterThenLoginGranted) {
  Rng rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const auto hcl = generate_hcl(rng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    RecordingChecker checker;
    Vault::Options o;
    o.rs_length = len;
    Vault vault(hcl, checker, o);
    const auto rs = random_rs(hcl, len, rng);
    const std::string pw = "pw" + std::to_string(rng());
    vault.register_user("u", pw, rs.str());
    ASSERT_EQ(vault.login("u", pw, rs.str()).verdict, Verdict::Granted);
  }
}

TEST(VaultProperties, CompromisedRecordLeavesFullCandidateSet) {
  // Given F and the ring, the attacker's candidate set is never narrowed
  // below L, and exactly one candidate is granted.
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto hcl = generate_hcl(rng);
    RecordingChecker checker;
    Vault vault(hcl, checker);
    const auto rs = random_rs(hcl, 3, rng);
    vault.register_user("u", "pw", rs.str());
    const auto candidates = enumerate_candidates(hcl, vault.find("u")->chain);
    ASSERT_EQ(candidates.size(), hcl.size());
    int granted = 0, alarms = 0;
    for (const auto& c : candidates) {
      const auto v = vault.login("u", "pw", c.str()).verdict;
      granted += v == Verdict::Granted;
      alarms += v == Verdict::AlarmHoneyRS;
    }
    ASSERT_EQ(granted, 1);
    ASSERT_EQ(alarms, 35);
  }
}

TEST(VaultProperties, CheckerOnlyContactedAfterBothChecks) {
  Rng rng(8);
  const auto hcl = generate_hcl(rng);
  RecordingChecker checker;
  Vault vault(hcl, checker);
  const auto rs = random_rs(hcl, 3, rng);
  vault.register_user("u", "pw", rs.str());
  const auto chain = vault.find("u")->chain;
  std::size_t expected_checks = 0;
  checker.calls.clear();
  for (int i = 0; i < 500; ++i) {
    const bool right_pw = rng() % 2;
    const auto guess = random_rs(hcl, 3, rng);
    vault.login("u", right_pw ? "pw" : "nope", guess.str());
    if (right_pw && distance_chain(hcl, guess) == chain) ++expected_checks;
  }
  EXPECT_EQ(checker.count_prefix("CHECK"), expected_checks);
}

// ---------------------------------------------------------------------------
// File F

TEST(PasswordFile, GoldenFixture) {
  const auto path = std::filesystem::path(PDP_TEST_DATA_DIR) / "golden_F.pdp";
  const auto text = read_file(path);
  const auto file = PasswordFile::parse(text);
  EXPECT_EQ(file.hcl.str(), testing::kFig3Ring);
  ASSERT_EQ(file.records.size(), 3u);
  EXPECT_EQ(file.records[0],
            (UserRecord{"alice", "854c67f5f07bf903153f242ad80a7c52",
                        "4548b32ff93df070e14b5ff872ab961605d00aa7349eeede95ad2368092ef00d",
                        DistanceChain({2, 2})}));
  EXPECT_EQ(file.records[1].username, "carol");
  EXPECT_EQ(file.records[1].chain.to_string(), "35-6");
  EXPECT_EQ(file.records[2].username, "dave");
  EXPECT_EQ(file.records[2].chain.to_string(), "1-6");
  EXPECT_EQ(file.serialize(), text);
}

TEST(PasswordFile, GoldenFixtureIsReproducible) {
  checker::CheckerStore store;
  checker::LocalChecker client(store);
  SeededByteSource salts(42);
  Vault::Options o;
  o.salts = &salts;
  Vault v(testing::fig3_hcl(), client, o);
  v.register_user("alice", "street99", "adg");
  v.register_user("carol", "pw", "tp7");
  v.register_user("dave", "hunter2", "q7e");
  EXPECT_EQ(v.snapshot().serialize(), read_file(std::filesystem::path(PDP_TEST_DATA_DIR) / "golden_F.pdp"));
}

TEST(PasswordFile, GoldenFixtureLogsIn) {
  const auto file = PasswordFile::load(std::filesystem::path(PDP_TEST_DATA_DIR) / "golden_F.pdp");
  checker::CheckerStore store;
  store.restore("SET alice a\nSET carol t\nSET dave q\n");
  checker::LocalChecker client(store);
  Vault v(file, client, {});
  EXPECT_EQ(v.login("carol", "pw", "tp7").verdict, Verdict::Granted);
  EXPECT_EQ(v.login("carol", "pw", "k8b").verdict, Verdict::AlarmHoneyRS);
  EXPECT_EQ(v.login("dave", "hunter2", "q7e").verdict, Verdict::Granted);
}

TEST(PasswordFile, SaveLoadRoundTrip) {
  RecordingChecker checker;
  Rng rng(1);
  Vault vault(generate_hcl(rng), checker);
  for (int i = 0; i < 20; ++i) {
    vault.register_user("user" + std::to_string(i), "pw", random_rs(vault.hcl(), 3, rng).str());
  }
  const auto path = std::filesystem::temp_directory_path() / "pdp_vault_roundtrip.pdp";
  vault.snapshot().save(path);
  const auto loaded = PasswordFile::load(path);
  EXPECT_EQ(loaded.hcl, vault.hcl());
  EXPECT_EQ(loaded.records, vault.records());
  EXPECT_EQ(loaded.serialize(), read_file(path));
  std::filesystem::remove(path);
}

TEST(PasswordFile, LoadErrors) {
  const std::string header = "#PDPv1 " + std::string(kAlphabet) + "\n";
  const std::string rec = "alice:854c67f5f07bf903153f242ad80a7c52:abcd:3-3\n";
  EXPECT_NO_THROW(PasswordFile::parse(header + rec));
  EXPECT_THROW(PasswordFile::parse(""), FormatError);
  EXPECT_THROW(PasswordFile::parse(header + rec + rec), FormatError);  // duplicate username
  EXPECT_THROW(PasswordFile::parse("#PDPv2 " + std::string(kAlphabet) + "\n"), FormatError);
  EXPECT_THROW(PasswordFile::parse("PDPv1 " + std::string(kAlphabet) + "\n"), FormatError);
  EXPECT_THROW(PasswordFile::parse("#PDPv1 abcabc\n"), FormatError);
  std::string dup_ring(kAlphabet);
  dup_ring[0] = 'b';
  EXPECT_THROW(PasswordFile::parse("#PDPv1 " + dup_ring + "\n"), FormatError);
  for (auto bad : {"alice:854c67f5f07bf903153f242ad80a7c52:abcd\n",
                   "alice:854c67f5f07bf903153f242ad80a7c52:abcd:3-3:x\n",
                   "alice:854c:abcd:3-3\n",
                   "alice:854c67f5f07bf903153f242ad80a7c5Z:abcd:3-3\n",
                   "alice:854c67f5f07bf903153f242ad80a7c52:abc:3-3\n",
                   "alice:854c67f5f07bf903153f242ad80a7c52:abcd:3-x\n",
                   "alice:854c67f5f07bf903153f242ad80a7c52:abcd:0-3\n",
                   "alice:854c67f5f07bf903153f242ad80a7c52:abcd:18-18\n",
                   "alice:854c67f5f07bf903153f242ad80a7c52:abcd:\n",
                   "al ice:854c67f5f07bf903153f242ad80a7c52:abcd:3-3\n",
                   "\n"}) {
    EXPECT_THROW(PasswordFile::parse(header + bad), FormatError) << bad;
  }
}

TEST(PasswordFile, VaultRejectsWrongChainLength) {
  const auto file = PasswordFile::parse("#PDPv1 " + std::string(kAlphabet) +
                                        "\nalice:854c67f5f07bf903153f242ad80a7c52:abcd:3-3-3\n");
  RecordingChecker checker;
  EXPECT_THROW(Vault(file, checker, {}), FormatError);
  Vault::Options four;
  four.rs_length = 4;
  EXPECT_NO_THROW(Vault(file, checker, four));
}

}  // namespace
}  // namespace pdp::vault

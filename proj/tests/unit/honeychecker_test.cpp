#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <atomic>
#include <thread>

#include "pdp/error.hpp"
#include "pdp/honeychecker.hpp"

namespace pdp::checker {
namespace {

struct Exchange {
  std::string request;
  std::string response;
};

std::vector<Exchange> load_transcript() {
  std::ifstream in(PDP_TEST_DATA_DIR "/checker_transcript.txt", std::ios::binary);
  std::vector<Exchange> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("> ", 0) == 0) {
      out.push_back({line.substr(2), {}});
    } else if (line == ">") {
      out.push_back({"", {}});
    } else if (line.rfind("< ", 0) == 0) {
      out.back().response = line.substr(2);
    }
  }
  return out;
}

TEST(CheckerService, Examples) {
  CheckerStore store;
  CheckerService svc(store);
  EXPECT_EQ(svc.handle("SET alice a"), "OK");
  EXPECT_EQ(svc.handle("CHECK alice a"), "POS");
  EXPECT_EQ(svc.handle("CHECK alice b"), "NEG");
  EXPECT_EQ(svc.handle("CHECK mallory x"), "UNKNOWN");
  EXPECT_EQ(svc.handle("SET alice b"), "OK");
  EXPECT_EQ(svc.handle("CHECK alice b"), "POS");
  EXPECT_EQ(svc.handle("SET alice 9"), "OK");
  EXPECT_EQ(svc.handle("CHECK alice 9"), "POS");
  EXPECT_EQ(svc.handle("CHECK alice 9\r"), "POS");
}

TEST(CheckerService, GoldenTranscriptInProcess) {
  const auto transcript = load_transcript();
  ASSERT_EQ(transcript.size(), 25u);
  CheckerStore store;
  CheckerService svc(store);
  std::string expected, actual;
  for (const auto& e : transcript) {
    expected += e.response + "\n";
    actual += svc.handle(e.request) + "\n";
  }
  EXPECT_EQ(actual, expected);
}

TEST(CheckerService, CheckIsSideEffectFree) {
  CheckerStore store;
  CheckerService svc(store);
  svc.handle("SET u q");
  const auto before = store.snapshot();
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(svc.handle("CHECK u q"), "POS");
    EXPECT_EQ(svc.handle("CHECK u r"), "NEG");
  }
  EXPECT_EQ(store.snapshot(), before);
}

TEST(CheckerService, MutationHookRunsOnSetAndDelOnly) {
  CheckerStore store;
  int changes = 0;
  CheckerService svc(store, [&] { ++changes; });
  svc.handle("SET a b");
  svc.handle("CHECK a b");
  svc.handle("SET a B");
  svc.handle("DEL a");
  EXPECT_EQ(changes, 2);
}

TEST(CheckerStore, SnapshotRoundTrip) {
  CheckerStore store;
  store.set("zed", '1');
  store.set("amy", 'q');
  EXPECT_EQ(store.snapshot(), "SET amy q\nSET zed 1\n");
  CheckerStore copy;
  copy.restore(store.snapshot());
  EXPECT_EQ(copy.snapshot(), store.snapshot());
  EXPECT_EQ(copy.check("amy", 'q'), Feedback::Pos);

  EXPECT_THROW(copy.restore("CHECK amy q\n"), FormatError);
  EXPECT_THROW(copy.restore("SET amy qq\n"), FormatError);
  EXPECT_THROW(copy.restore("SET amy\n"), FormatError);
  EXPECT_THROW(copy.restore("SET amy q extra\n"), FormatError);
  // A failed restore leaves the previous contents.
  EXPECT_EQ(copy.check("zed", '1'), Feedback::Pos);
}

TEST(CheckerStore, SnapshotFile) {
  const auto path = std::filesystem::temp_directory_path() / "pdp_checker_snapshot_test.checker";
  CheckerStore store;
  store.set("bob", 'k');
  store.save(path);
  CheckerStore loaded;
  loaded.load(path);
  EXPECT_EQ(loaded.check("bob", 'k'), Feedback::Pos);
  std::filesystem::remove(path);
}

TEST(CheckerStore, RejectsInvalidInput) {
  CheckerStore store;
  EXPECT_THROW(store.set("", 'a'), ValidationError);
  EXPECT_THROW(store.set("a b", 'a'), ValidationError);
  EXPECT_THROW(store.set("a", 'A'), ValidationError);
}

TEST(CheckerClient, RecoverFirstCharProbesWithCheck) {
  CheckerStore store;
  LocalChecker client(store);
  client.set("u", 'm');
  EXPECT_EQ(client.recover_first_char("u", "abcdefghijklmnopqrstuvwxyz0123456789"), 'm');
  EXPECT_EQ(client.recover_first_char("nobody", "abc"), std::nullopt);
}

TEST(CheckerServer, GoldenTranscriptOverTcp) {
  CheckerStore store;
  CheckerService svc(store);
  CheckerServer server(svc, "127.0.0.1", 0);
  server.start();
  RemoteChecker client("127.0.0.1", server.port());
  std::string expected, actual;
  for (const auto& e : load_transcript()) {
    expected += e.response + "\n";
    actual += client.request(e.request) + "\n";
  }
  EXPECT_EQ(actual, expected);
  server.stop();
}

TEST(CheckerServer, RemoteClientApi) {
  CheckerStore store;
  CheckerService svc(store);
  CheckerServer server(svc, "127.0.0.1", 0);
  server.start();
  RemoteChecker client("127.0.0.1", server.port());
  client.set("alice", 'a');
  EXPECT_EQ(client.check("alice", 'a'), Feedback::Pos);
  EXPECT_EQ(client.check("alice", 'b'), Feedback::Neg);
  EXPECT_EQ(client.check("carol", 'b'), Feedback::Unknown);
  EXPECT_EQ(client.recover_first_char("alice", "zyxabc"), 'a');
  client.erase("alice");
  EXPECT_EQ(client.check("alice", 'a'), Feedback::Unknown);
  EXPECT_THROW(client.set("bad user", 'a'), Error);
  server.stop();
}

TEST(CheckerServer, ConcurrentClientsAreLinearizable) {
  CheckerStore store;
  CheckerService svc(store);
  CheckerServer server(svc, "127.0.0.1", 0);
  server.start();
  constexpr int kClients = 8;
  constexpr int kOps = 200;
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int t = 0; t < kClients; ++t) {
    threads.emplace_back([&, t] {
      RemoteChecker client("127.0.0.1", server.port());
      const std::string user = "user" + std::to_string(t);
      for (int i = 0; i < kOps; ++i) {
        const char c = static_cast<char>('a' + (i % 26));
        client.set(user, c);
        // Each client owns its user, so its own SET must be visible to its next CHECK.
        if (client.check(user, c) != Feedback::Pos) ++failures;
        // Shared user: any verdict but UNKNOWN after the first SET is fine.
        client.set("shared", c);
        if (client.check("shared", 'a') == Feedback::Unknown) ++failures;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(store.size(), kClients + 1u);
  server.stop();
}

TEST(CheckerServer, OverlongLineGetsError) {
  CheckerStore store;
  CheckerService svc(store);
  CheckerServer server(svc, "127.0.0.1", 0);
  server.start();
  RemoteChecker client("127.0.0.1", server.port());
  EXPECT_EQ(client.request("SET " + std::string(10000, 'x') + " a"), "ERR line too long");
  server.stop();
}

}  // namespace
}  // namespace pdp::checker

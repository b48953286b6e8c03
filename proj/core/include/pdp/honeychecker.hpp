#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdp::checker {

enum class Feedback { Pos, Neg, Unknown };

std::string_view to_string(Feedback f) noexcept;

/// Usernames are non-empty and contain neither ':' nor whitespace.
bool valid_username(std::string_view username) noexcept;
/// Characters accepted by the checker: [a-z0-9].
bool valid_first_char(char c) noexcept;

/// Client side of the vault/checker split. The checker only ever sees a
/// username and one character.
class CheckerClient {
 public:
  virtual ~CheckerClient() = default;
  virtual void set(std::string_view username, char first_char) = 0;
  virtual Feedback check(std::string_view username, char first_char) = 0;
  virtual void erase(std::string_view username) = 0;

  /// Recovers the stored character by probing CHECK over `alphabet`. Used by
  /// rekey, which needs the first character but must not widen the wire
  /// protocol. Empty if the user is unknown.
  std::optional<char> recover_first_char(std::string_view username, std::string_view alphabet);
};

/// Thread-safe (username -> first character) table.
class CheckerStore {
 public:
  void set(std::string_view username, char first_char);
  Feedback check(std::string_view username, char first_char) const;
  void erase(std::string_view username);
  std::size_t size() const;

  /// SET lines sorted by username, each '\n'-terminated.
  std::string snapshot() const;
  /// Replaces the contents with the SET lines in `text`. Throws FormatError.
  void restore(std::string_view text);

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  mutable std::mutex mu_;
  std::map<std::string, char, std::less<>> records_;
};

/// Line protocol: SET/CHECK/DEL requests, one response line each.
class CheckerService {
 public:
  /// `on_change` runs after every successful SET or DEL.
  explicit CheckerService(CheckerStore& store, std::function<void()> on_change = {})
      : store_(store), on_change_(std::move(on_change)) {}

  /// Handles one request line (without its '\n'); returns the response
  /// without '\n'. A trailing '\r' is tolerated.
  std::string handle(std::string_view line);

 private:
  CheckerStore& store_;
  std::function<void()> on_change_;
};

/// In-process client bound directly to a store.
class LocalChecker final : public CheckerClient {
 public:
  explicit LocalChecker(CheckerStore& store) : store_(store) {}
  void set(std::string_view username, char first_char) override { store_.set(username, first_char); }
  Feedback check(std::string_view username, char first_char) override {
    return store_.check(username, first_char);
  }
  void erase(std::string_view username) override { store_.erase(username); }

 private:
  CheckerStore& store_;
};

/// TCP server speaking the line protocol. Connections are served
/// asynchronously on one I/O thread; the store serializes SET/CHECK/DEL.
class CheckerServer {
 public:
  /// Binds to `address`:`port`; port 0 picks an ephemeral port.
  CheckerServer(CheckerService& service, std::string address, std::uint16_t port);
  ~CheckerServer();
  CheckerServer(const CheckerServer&) = delete;
  CheckerServer& operator=(const CheckerServer&) = delete;

  std::uint16_t port() const noexcept;
  /// Accepts connections on a background thread.
  void start();
  /// Accepts on the calling thread until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Client speaking the line protocol over TCP.
class RemoteChecker final : public CheckerClient {
 public:
  RemoteChecker(const std::string& host, std::uint16_t port);
  ~RemoteChecker() override;

  void set(std::string_view username, char first_char) override;
  Feedback check(std::string_view username, char first_char) override;
  void erase(std::string_view username) override;

  /// Sends one raw request line, returns the raw response line.
  std::string request(std::string_view line);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pdp::checker

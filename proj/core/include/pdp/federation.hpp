#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pdp/hcl.hpp"
#include "pdp/honeychecker.hpp"
#include "pdp/random.hpp"
#include "pdp/vault.hpp"

namespace pdp::federation {

using SystemId = std::uint32_t;

inline constexpr std::uint64_t kDefaultRekeyThreshold = 3;
inline constexpr std::size_t kDefaultMaxRetries = 3;

/// Rekey protocol message. Text form, one per line:
///   SM <sys-id> | ACK <sys-id> | UHCL <ring>
struct RekeyMessage {
  enum class Kind { Sm, Ack, Uhcl };

  Kind kind = Kind::Sm;
  SystemId sender = 0;  ///< SM and ACK only; the UHCL line carries no sender
  std::string ring;     ///< UHCL only

  std::string encode() const;
  /// Throws FormatError. UHCL rings are checked to be permutations.
  static RekeyMessage decode(std::string_view line);

  friend bool operator==(const RekeyMessage&, const RekeyMessage&) = default;
};

struct Envelope {
  SystemId from = 0;
  SystemId to = 0;
  std::string line;
};

/// Fault injection for the simulated network.
struct BusFaults {
  bool reorder = false;              ///< deliver a uniformly random ready message
  double duplicate_probability = 0;  ///< chance each send is enqueued twice
  double drop_probability = 0;       ///< chance each send is lost
  std::size_t max_delay = 0;         ///< extra delivery steps drawn uniformly in [0, max_delay]
};

enum class Schedule { Fifo, Reorder, Duplicate };

std::string_view to_string(Schedule s) noexcept;
/// Throws FormatError for names other than fifo, reorder and duplicate.
Schedule parse_schedule(std::string_view name);
BusFaults faults_for(Schedule s);

/// Deterministic, seed-controlled message bus. Single-threaded.
class MessageBus {
 public:
  explicit MessageBus(std::uint64_t seed, BusFaults faults = {});

  void send(SystemId from, SystemId to, const RekeyMessage& message);
  /// Next message to deliver, or empty when nothing is in flight.
  std::optional<Envelope> next();

  bool empty() const noexcept { return pending_.empty(); }
  std::size_t in_flight() const noexcept { return pending_.size(); }
  std::uint64_t sent() const noexcept { return sent_; }
  std::uint64_t delivered() const noexcept { return delivered_; }
  std::uint64_t dropped() const noexcept { return dropped_; }
  std::uint64_t duplicated() const noexcept { return duplicated_; }
  /// "<from> -> <to>: <line>" for every delivered message.
  const std::vector<std::string>& transcript() const noexcept { return transcript_; }

 private:
  struct Pending {
    Envelope envelope;
    std::uint64_t ready_at = 0;
  };

  void enqueue(const Envelope& e);

  Rng rng_;
  BusFaults faults_;
  std::deque<Pending> pending_;
  std::uint64_t clock_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t duplicated_ = 0;
  std::vector<std::string> transcript_;
};

enum class NodeState { Idle, AwaitingAcks, Acked };

std::string_view to_string(NodeState s) noexcept;

/// One authentication system in the federation: a vault, its own
/// honeychecker, and the rekey state machine.
class SystemNode {
 public:
  struct Options {
    std::uint64_t rekey_threshold = kDefaultRekeyThreshold;
    std::size_t max_retries = kDefaultMaxRetries;
    std::size_t rs_length = kDefaultRsLength;
  };

  SystemNode(SystemId id, HoneyCircularList hcl, std::uint64_t seed, Options options);
  SystemNode(const SystemNode&) = delete;
  SystemNode& operator=(const SystemNode&) = delete;

  SystemId id() const noexcept { return id_; }
  void set_peers(std::vector<SystemId> peers) { peers_ = std::move(peers); }
  const std::vector<SystemId>& peers() const noexcept { return peers_; }

  vault::Vault& vault() noexcept { return vault_; }
  const vault::Vault& vault() const noexcept { return vault_; }
  checker::CheckerStore& checker_store() noexcept { return store_; }
  const HoneyCircularList& hcl() const noexcept { return vault_.hcl(); }

  std::uint64_t neg_count() const noexcept { return neg_count_; }
  NodeState state() const noexcept { return state_; }
  std::uint64_t epochs_completed() const noexcept { return epochs_completed_; }
  std::uint64_t epochs_aborted() const noexcept { return epochs_aborted_; }
  std::uint64_t retries() const noexcept { return retries_total_; }
  std::uint64_t duplicates_ignored() const noexcept { return duplicates_ignored_; }

  /// Throws UnavailableError while this node is initiating a rekey.
  vault::LoginOutcome login(std::string_view username, std::string_view password,
                            std::string_view rs);

  /// Broadcasts SM and starts an epoch when neg_count has reached the
  /// threshold. Returns true if an epoch was started.
  bool sense_and_broadcast(MessageBus& bus);

  /// Starts an epoch regardless of neg_count. `next` fixes the replacement
  /// ring instead of drawing one.
  void start_epoch(MessageBus& bus, std::optional<HoneyCircularList> next = std::nullopt);

  void receive(const Envelope& envelope, MessageBus& bus);

  /// Called when the bus has drained while this node still waits for ACKs.
  /// Re-sends SM to silent peers, or aborts after max_retries. Returns true
  /// if the epoch is still alive.
  bool on_timeout(MessageBus& bus);

 private:
  void complete_epoch(MessageBus& bus);
  void apply_ring(const HoneyCircularList& next);
  HoneyCircularList draw_ring();
  void send_ack(MessageBus& bus, SystemId to);

  SystemId id_;
  Options options_;
  std::vector<SystemId> peers_;
  Rng rng_;
  SeededByteSource salts_;
  checker::CheckerStore store_;
  checker::LocalChecker client_{store_};
  vault::Vault vault_;

  std::uint64_t neg_count_ = 0;
  NodeState state_ = NodeState::Idle;
  std::set<SystemId> acks_;
  std::size_t retries_ = 0;
  std::optional<HoneyCircularList> forced_next_;
  std::set<std::string> retired_rings_;
  std::uint64_t epochs_completed_ = 0;
  std::uint64_t epochs_aborted_ = 0;
  std::uint64_t retries_total_ = 0;
  std::uint64_t duplicates_ignored_ = 0;
};

struct FederationConfig {
  std::size_t nodes = 2;
  std::uint64_t seed = 0;
  std::uint64_t rekey_threshold = kDefaultRekeyThreshold;
  std::size_t max_retries = kDefaultMaxRetries;
  std::size_t rs_length = kDefaultRsLength;
  BusFaults faults;
};

struct QuiescenceReport {
  std::uint64_t messages_delivered = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t epochs_completed = 0;  ///< across all nodes, as initiators
  std::uint64_t epochs_aborted = 0;
};

/// m systems sharing one ring, connected by a MessageBus. Node ids are 0..m-1.
class Federation {
 public:
  /// All nodes start on `initial`; distributing it is out of band.
  Federation(FederationConfig config, HoneyCircularList initial);

  std::size_t size() const noexcept { return nodes_.size(); }
  SystemNode& node(SystemId id) { return *nodes_.at(id); }
  const SystemNode& node(SystemId id) const { return *nodes_.at(id); }
  MessageBus& bus() noexcept { return bus_; }

  /// Registers identical credentials on every node.
  void register_everywhere(std::string_view username, std::string_view password,
                           std::string_view rs);

  /// Login at one node; an alarm there may start an epoch.
  vault::LoginOutcome login(SystemId at, std::string_view username, std::string_view password,
                            std::string_view rs);

  /// Delivers messages until nothing is in flight and no node waits for ACKs.
  QuiescenceReport run_until_quiescent(std::size_t max_steps = 1'000'000);

  /// Starts an epoch at `initiator` and runs it to completion.
  QuiescenceReport run_rekey(SystemId initiator,
                             std::optional<HoneyCircularList> next = std::nullopt);

  /// True when every node holds the same ring.
  bool converged() const;

  /// Writes node-<id>.pdp (file F) and node-<id>.checker (snapshot) into `dir`.
  std::vector<std::filesystem::path> persist(const std::filesystem::path& dir) const;

 private:
  FederationConfig config_;
  MessageBus bus_;
  std::vector<std::unique_ptr<SystemNode>> nodes_;
};

}  // namespace pdp::federation

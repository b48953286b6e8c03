#include "pdp/federation.hpp"

#include <algorithm>
#include <charconv>

#include "pdp/error.hpp"

namespace pdp::federation {

// ---------------------------------------------------------------------------
// Messages

std::string RekeyMessage::encode() const {
  switch (kind) {
    case Kind::Sm: return "SM " + std::to_string(sender);
    case Kind::Ack: return "ACK " + std::to_string(sender);
    case Kind::Uhcl: return "UHCL " + ring;
  }
  return {};
}

RekeyMessage RekeyMessage::decode(std::string_view line) {
  const auto space = line.find(' ');
  if (space == line.npos || space + 1 >= line.size()) {
    throw FormatError("malformed rekey message: '" + std::string(line) + "'");
  }
  const auto verb = line.substr(0, space);
  const auto arg = line.substr(space + 1);
  RekeyMessage m;
  if (verb == "UHCL") {
    m.kind = Kind::Uhcl;
    m.ring = HoneyCircularList::parse(arg).str();
    return m;
  }
  if (verb == "SM") m.kind = Kind::Sm;
  else if (verb == "ACK") m.kind = Kind::Ack;
  else throw FormatError("unknown rekey message kind: '" + std::string(verb) + "'");
  const auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), m.sender);
  if (ec != std::errc{} || end != arg.data() + arg.size()) {
    throw FormatError("malformed system id: '" + std::string(arg) + "'");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Bus

std::string_view to_string(Schedule s) noexcept {
  switch (s) {
    case Schedule::Fifo: return "fifo";
    case Schedule::Reorder: return "reorder";
    case Schedule::Duplicate: return "duplicate";
  }
  return "?";
}

Schedule parse_schedule(std::string_view name) {
  if (name == "fifo") return Schedule::Fifo;
  if (name == "reorder") return Schedule::Reorder;
  if (name == "duplicate") return Schedule::Duplicate;
  throw FormatError("unknown schedule: '" + std::string(name) + "'");
}

BusFaults faults_for(Schedule s) {
  BusFaults f;
  switch (s) {
    case Schedule::Fifo: break;
    case Schedule::Reorder:
      f.reorder = true;
      f.max_delay = 4;
      break;
    case Schedule::Duplicate:
      f.reorder = true;
      f.duplicate_probability = 0.5;
      break;
  }
  return f;
}

MessageBus::MessageBus(std::uint64_t seed, BusFaults faults)
    : rng_(stream_rng(seed, 0xb05)), faults_(faults) {}

void MessageBus::enqueue(const Envelope& e) {
  std::uint64_t delay = 0;
  if (faults_.max_delay > 0) {
    delay = std::uniform_int_distribution<std::uint64_t>(0, faults_.max_delay)(rng_);
  }
  pending_.push_back({e, clock_ + delay});
}

void MessageBus::send(SystemId from, SystemId to, const RekeyMessage& message) {
  ++sent_;
  std::bernoulli_distribution drop(faults_.drop_probability);
  std::bernoulli_distribution dup(faults_.duplicate_probability);
  const Envelope e{from, to, message.encode()};
  if (faults_.drop_probability > 0 && drop(rng_)) {
    ++dropped_;
    return;
  }
  enqueue(e);
  if (faults_.duplicate_probability > 0 && dup(rng_)) {
    ++duplicated_;
    enqueue(e);
  }
}

std::optional<Envelope> MessageBus::next() {
  if (pending_.empty()) return std::nullopt;
  ++clock_;
  const auto earliest =
      std::min_element(pending_.begin(), pending_.end(), [](const auto& a, const auto& b) {
        return a.ready_at < b.ready_at;
      })->ready_at;
  clock_ = std::max(clock_, earliest);

  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    if (pending_[i].ready_at <= clock_) ready.push_back(i);
  }
  std::size_t pick = ready.front();
  if (faults_.reorder && ready.size() > 1) {
    pick = ready[std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng_)];
  }
  Envelope e = std::move(pending_[pick].envelope);
  pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(pick));
  ++delivered_;
  transcript_.push_back(std::to_string(e.from) + " -> " + std::to_string(e.to) + ": " + e.line);
  return e;
}

// ---------------------------------------------------------------------------
// Node

std::string_view to_string(NodeState s) noexcept {
  switch (s) {
    case NodeState::Idle: return "idle";
    case NodeState::AwaitingAcks: return "awaiting-acks";
    case NodeState::Acked: return "acked";
  }
  return "?";
}

namespace {

vault::Vault::Options vault_options(const SystemNode::Options& o, ByteSource* salts) {
  vault::Vault::Options v;
  v.rs_length = o.rs_length;
  v.salts = salts;
  return v;
}

}  // namespace

SystemNode::SystemNode(SystemId id, HoneyCircularList hcl, std::uint64_t seed, Options options)
    : id_(id),
      options_(options),
      rng_(stream_rng(seed, 0x1000 + id)),
      salts_(splitmix64(seed) ^ id),
      vault_(std::move(hcl), client_, vault_options(options, &salts_)) {}

vault::LoginOutcome SystemNode::login(std::string_view username, std::string_view password,
                                      std::string_view rs) {
  if (state_ == NodeState::AwaitingAcks) {
    throw UnavailableError("logins suspended during rekey at system " + std::to_string(id_));
  }
  auto outcome = vault_.login(username, password, rs);
  if (outcome.verdict == vault::Verdict::AlarmHoneyRS) ++neg_count_;
  return outcome;
}

bool SystemNode::sense_and_broadcast(MessageBus& bus) {
  if (state_ == NodeState::AwaitingAcks || neg_count_ < options_.rekey_threshold) return false;
  start_epoch(bus);
  return true;
}

void SystemNode::start_epoch(MessageBus& bus, std::optional<HoneyCircularList> next) {
  state_ = NodeState::AwaitingAcks;
  acks_.clear();
  retries_ = 0;
  forced_next_ = std::move(next);
  if (peers_.empty()) {
    complete_epoch(bus);
    return;
  }
  for (auto peer : peers_) bus.send(id_, peer, {RekeyMessage::Kind::Sm, id_, {}});
}

void SystemNode::send_ack(MessageBus& bus, SystemId to) {
  bus.send(id_, to, {RekeyMessage::Kind::Ack, id_, {}});
}

void SystemNode::receive(const Envelope& envelope, MessageBus& bus) {
  const auto message = RekeyMessage::decode(envelope.line);
  switch (message.kind) {
    case RekeyMessage::Kind::Sm: {
      if (state_ == NodeState::AwaitingAcks) {
        // Competing initiators: the lowest id proceeds.
        if (id_ < message.sender) return;
        state_ = NodeState::Idle;
        ++epochs_aborted_;
      }
      state_ = NodeState::Acked;
      send_ack(bus, message.sender);
      return;
    }
    case RekeyMessage::Kind::Ack: {
      if (state_ != NodeState::AwaitingAcks) {
        ++duplicates_ignored_;
        return;
      }
      if (std::find(peers_.begin(), peers_.end(), message.sender) == peers_.end()) return;
      if (!acks_.insert(message.sender).second) {
        ++duplicates_ignored_;
        return;
      }
      if (acks_.size() == peers_.size()) complete_epoch(bus);
      return;
    }
    case RekeyMessage::Kind::Uhcl: {
      auto next = HoneyCircularList::parse(message.ring);
      if (next.size() != hcl().size()) throw FormatError("UHCL ring has the wrong size");
      if (next == hcl() || retired_rings_.contains(message.ring)) {
        ++duplicates_ignored_;
        return;
      }
      if (state_ == NodeState::AwaitingAcks) ++epochs_aborted_;
      apply_ring(next);
      return;
    }
  }
}

bool SystemNode::on_timeout(MessageBus& bus) {
  if (state_ != NodeState::AwaitingAcks) return false;
  if (retries_ >= options_.max_retries) {
    state_ = NodeState::Idle;
    ++epochs_aborted_;
    return false;
  }
  ++retries_;
  ++retries_total_;
  for (auto peer : peers_) {
    if (!acks_.contains(peer)) bus.send(id_, peer, {RekeyMessage::Kind::Sm, id_, {}});
  }
  return true;
}

HoneyCircularList SystemNode::draw_ring() {
  while (true) {
    auto ring = generate_hcl(rng_, hcl().size());
    if (ring != hcl() && !retired_rings_.contains(std::string(ring.str()))) return ring;
  }
}

void SystemNode::complete_epoch(MessageBus& bus) {
  HoneyCircularList next = forced_next_ ? *forced_next_ : draw_ring();
  forced_next_.reset();
  if (next == hcl()) throw DomainError("replacement ring equals the current ring");
  for (auto peer : peers_) {
    bus.send(id_, peer, {RekeyMessage::Kind::Uhcl, id_, std::string(next.str())});
  }
  apply_ring(next);
  ++epochs_completed_;
}

void SystemNode::apply_ring(const HoneyCircularList& next) {
  const auto& old = vault_.hcl();
  std::vector<DistanceChain> chains;
  chains.reserve(vault_.records().size());
  for (const auto& record : vault_.records()) {
    const auto first = client_.recover_first_char(record.username, old.alphabet());
    if (!first) {
      throw Error("honeychecker has no record for '" + record.username + "' during rekey");
    }
    // The full RS exists only for the next three statements.
    auto rs = derive_rs(old, *first, record.chain);
    chains.push_back(distance_chain(next, rs));
    client_.set(record.username, *first);
    rs.scrub();
  }
  retired_rings_.insert(std::string(old.str()));
  vault_.adopt(next, std::move(chains));
  neg_count_ = 0;
  state_ = NodeState::Idle;
  acks_.clear();
}

// ---------------------------------------------------------------------------
// Federation

Federation::Federation(FederationConfig config, HoneyCircularList initial)
    : config_(config), bus_(config.seed, config.faults) {
  if (config_.nodes == 0) throw DomainError("a federation needs at least one system");
  SystemNode::Options options{config_.rekey_threshold, config_.max_retries, config_.rs_length};
  for (SystemId id = 0; id < config_.nodes; ++id) {
    nodes_.push_back(std::make_unique<SystemNode>(id, initial, config_.seed, options));
  }
  for (auto& n : nodes_) {
    std::vector<SystemId> peers;
    for (SystemId id = 0; id < config_.nodes; ++id) {
      if (id != n->id()) peers.push_back(id);
    }
    n->set_peers(std::move(peers));
  }
}

void Federation::register_everywhere(std::string_view username, std::string_view password,
                                     std::string_view rs) {
  for (auto& n : nodes_) n->vault().register_user(username, password, rs);
}

vault::LoginOutcome Federation::login(SystemId at, std::string_view username,
                                      std::string_view password, std::string_view rs) {
  auto& n = node(at);
  auto outcome = n.login(username, password, rs);
  n.sense_and_broadcast(bus_);
  return outcome;
}

QuiescenceReport Federation::run_until_quiescent(std::size_t max_steps) {
  QuiescenceReport report;
  std::uint64_t completed_before = 0, aborted_before = 0;
  for (const auto& n : nodes_) {
    completed_before += n->epochs_completed();
    aborted_before += n->epochs_aborted();
  }
  for (std::size_t step = 0; step < max_steps; ++step) {
    if (auto e = bus_.next()) {
      node(e->to).receive(*e, bus_);
      ++report.messages_delivered;
      continue;
    }
    bool waiting = false;
    for (auto& n : nodes_) {
      if (n->state() == NodeState::AwaitingAcks) {
        ++report.timeouts;
        waiting |= n->on_timeout(bus_);
      }
    }
    if (!waiting && bus_.empty()) break;
  }
  for (const auto& n : nodes_) {
    report.epochs_completed += n->epochs_completed();
    report.epochs_aborted += n->epochs_aborted();
  }
  report.epochs_completed -= completed_before;
  report.epochs_aborted -= aborted_before;
  return report;
}

QuiescenceReport Federation::run_rekey(SystemId initiator, std::optional<HoneyCircularList> next) {
  node(initiator).start_epoch(bus_, std::move(next));
  return run_until_quiescent();
}

bool Federation::converged() const {
  return std::all_of(nodes_.begin(), nodes_.end(),
                     [&](const auto& n) { return n->hcl() == nodes_.front()->hcl(); });
}

std::vector<std::filesystem::path> Federation::persist(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& n : nodes_) {
    const auto base = dir / ("node-" + std::to_string(n->id()));
    auto f = base;
    f += ".pdp";
    auto c = base;
    c += ".checker";
    n->vault().snapshot().save(f);
    n->checker_store().save(c);
    out.push_back(f);
    out.push_back(c);
  }
  return out;
}

}  // namespace pdp::federation

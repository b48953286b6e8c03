#include "pdp/chain.hpp"

#include <algorithm>
#include <charconv>

#include "pdp/error.hpp"

namespace pdp {

namespace {

void check_entries(const DistanceChain& chain, std::size_t ring_size) {
  if (!chain.entries_in_range(ring_size)) {
    throw DomainError("chain entry outside [1, " + std::to_string(ring_size - 1) +
                      "]: " + chain.to_string());
  }
}

}  // namespace

RandomString RandomString::parse(const HoneyCircularList& hcl, std::string_view text) {
  if (text.size() < kMinRsLength) {
    throw ValidationError("random string must have at least 2 characters");
  }
  if (text.size() > hcl.size()) {
    throw ValidationError("random string longer than the ring");
  }
  std::array<bool, 128> seen{};
  for (char c : text) {
    if (!hcl.contains(c)) {
      throw ValidationError(std::string("random string character not in alphabet: '") + c +
                            "'");
    }
    auto& mark = seen[static_cast<unsigned char>(c)];
    if (mark) {
      throw ValidationError(std::string("random string repeats character '") + c + "'");
    }
    mark = true;
  }
  return RandomString(std::string(text));
}

void RandomString::scrub() noexcept {
  volatile char* p = chars_.data();
  for (std::size_t i = 0; i < chars_.size(); ++i) p[i] = '\0';
  chars_.clear();
}

DistanceChain DistanceChain::parse(std::string_view text) {
  std::vector<int> out;
  if (text.empty()) return DistanceChain{};
  std::size_t pos = 0;
  while (true) {
    const auto dash = text.find('-', pos);
    const auto field = text.substr(pos, dash == std::string_view::npos ? text.npos : dash - pos);
    int value = 0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size() || value < 0 ||
        field.front() == '+') {
      throw FormatError("malformed distance chain: '" + std::string(text) + "'");
    }
    out.push_back(value);
    if (dash == std::string_view::npos) break;
    pos = dash + 1;
  }
  return DistanceChain(std::move(out));
}

std::string DistanceChain::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < distances_.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(distances_[i]);
  }
  return out;
}

bool DistanceChain::entries_in_range(std::size_t ring_size) const noexcept {
  const int hi = static_cast<int>(ring_size) - 1;
  return std::all_of(distances_.begin(), distances_.end(),
                     [hi](int d) { return d >= 1 && d <= hi; });
}

bool DistanceChain::offsets_distinct(std::size_t ring_size) const {
  if (distances_.size() + 1 > ring_size) return false;
  std::vector<bool> used(ring_size, false);
  std::size_t offset = 0;
  used[0] = true;
  for (int d : distances_) {
    if (d < 0) return false;
    offset = (offset + static_cast<std::size_t>(d)) % ring_size;
    if (used[offset]) return false;
    used[offset] = true;
  }
  return true;
}

int paired_distance(const HoneyCircularList& hcl, char e1, char e2) {
  const auto n = hcl.size();
  return static_cast<int>((hcl.index_of(e2) + n - hcl.index_of(e1)) % n);
}

DistanceChain distance_chain(const HoneyCircularList& hcl, const RandomString& rs) {
  std::vector<int> out;
  out.reserve(rs.size() - 1);
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    const int d = paired_distance(hcl, rs[i], rs[i + 1]);
    if (d == 0) throw ValidationError("random string repeats a character");
    out.push_back(d);
  }
  return DistanceChain(std::move(out));
}

std::optional<RandomString> try_derive_rs(const HoneyCircularList& hcl, char first,
                                          const DistanceChain& chain) {
  check_entries(chain, hcl.size());
  std::size_t pos = hcl.index_of(first);
  std::string out(1, first);
  out.reserve(chain.size() + 1);
  for (int d : chain.distances()) {
    pos = (pos + static_cast<std::size_t>(d)) % hcl.size();
    const char next = hcl.at(pos);
    if (out.find(next) != std::string::npos) return std::nullopt;
    out.push_back(next);
  }
  return RandomString(std::move(out));
}

RandomString derive_rs(const HoneyCircularList& hcl, char first, const DistanceChain& chain) {
  auto rs = try_derive_rs(hcl, first, chain);
  if (!rs) {
    throw InvalidChainError("chain " + chain.to_string() + " revisits a cell when started at '" +
                            first + "'");
  }
  return std::move(*rs);
}

std::vector<RandomString> enumerate_candidates(const HoneyCircularList& hcl,
                                               const DistanceChain& chain) {
  check_entries(chain, hcl.size());
  std::vector<RandomString> out;
  // Offsets collide for every start or for none.
  if (!chain.offsets_distinct(hcl.size())) return out;
  out.reserve(hcl.size());
  for (std::size_t start = 0; start < hcl.size(); ++start) {
    if (auto rs = try_derive_rs(hcl, hcl.at(start), chain)) out.push_back(std::move(*rs));
  }
  return out;
}

RandomString random_rs(const HoneyCircularList& hcl, std::size_t length, Rng& rng) {
  if (length < kMinRsLength || length > hcl.size()) {
    throw DomainError("random string length must be in [2, ring size]");
  }
  std::string pool(hcl.alphabet());
  // Partial Fisher-Yates: the first `length` cells are a uniform draw without replacement.
  for (std::size_t i = 0; i < length; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(length);
  return RandomString(std::move(pool));
}

}  // namespace pdp

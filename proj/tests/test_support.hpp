#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pdp/chain.hpp"
#include "pdp/hcl.hpp"
#include "pdp/honeychecker.hpp"

namespace pdp::testing {

/// Ring reconstructed so that every worked example in the protocol
/// description holds: d(t,p)=35, d(p,7)=6, and chain 35-6 also yields
/// "k8b" and "ekx".
inline constexpr std::string_view kFig3Ring = "acdfghijlptmnoq7rsu8kevwybxz01234569";

inline HoneyCircularList fig3_hcl() { return HoneyCircularList::parse(kFig3Ring); }

/// Checker stub that records every call in order.
class RecordingChecker final : public checker::CheckerClient {
 public:
  void set(std::string_view user, char c) override {
    calls.push_back("SET " + std::string(user) + ' ' + c);
    store.set(user, c);
  }
  checker::Feedback check(std::string_view user, char c) override {
    calls.push_back("CHECK " + std::string(user) + ' ' + c);
    return store.check(user, c);
  }
  void erase(std::string_view user) override {
    calls.push_back("DEL " + std::string(user));
    store.erase(user);
  }

  std::size_t count_prefix(std::string_view prefix) const {
    std::size_t n = 0;
    for (const auto& c : calls) n += c.rfind(prefix, 0) == 0;
    return n;
  }

  checker::CheckerStore store;
  std::vector<std::string> calls;
};

// ---------------------------------------------------------------------------
// Oracles. These work on the raw ring text with std::string::find and plain
// index arithmetic so they share no code path with the library.

/// Start-by-start walk: every start whose walk visits distinct cells.
inline std::vector<std::string> brute_force_candidates(std::string_view ring,
                                                       const std::vector<int>& chain) {
  std::vector<std::string> out;
  const int n = static_cast<int>(ring.size());
  for (int start = 0; start < n; ++start) {
    std::string s(1, ring[start]);
    int pos = start;
    bool ok = true;
    for (int d : chain) {
      pos = ((pos + d) % n + n) % n;
      if (s.find(ring[pos]) != std::string::npos) {
        ok = false;
        break;
      }
      s += ring[pos];
    }
    if (ok) out.push_back(s);
  }
  return out;
}

inline std::vector<int> brute_force_chain(std::string_view ring, std::string_view rs) {
  std::vector<int> out;
  const int n = static_cast<int>(ring.size());
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    const int a = static_cast<int>(ring.find(rs[i]));
    const int b = static_cast<int>(ring.find(rs[i + 1]));
    out.push_back(((b - a) % n + n) % n);
  }
  return out;
}

/// Every string of `len` distinct characters from `alphabet`, by nested
/// index loops (odometer), independent of the library's enumerator.
inline std::vector<std::string> all_distinct_strings(std::string_view alphabet, std::size_t len) {
  std::vector<std::string> out;
  std::vector<std::size_t> idx(len, 0);
  const std::size_t n = alphabet.size();
  if (len > n) return out;
  while (true) {
    bool distinct = true;
    for (std::size_t i = 0; i < len && distinct; ++i)
      for (std::size_t j = i + 1; j < len; ++j)
        if (idx[i] == idx[j]) distinct = false;
    if (distinct) {
      std::string s;
      for (auto i : idx) s += alphabet[i];
      out.push_back(s);
    }
    std::size_t k = len;
    while (k > 0) {
      --k;
      if (++idx[k] < n) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (len == 0) return out;
  }
}

}  // namespace pdp::testing

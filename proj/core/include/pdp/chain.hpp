#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdp/hcl.hpp"

namespace pdp {

inline constexpr std::size_t kDefaultRsLength = 3;
inline constexpr std::size_t kMinRsLength = 2;

class DistanceChain;
class RandomString;

std::optional<RandomString> try_derive_rs(const HoneyCircularList&, char, const DistanceChain&);
RandomString random_rs(const HoneyCircularList&, std::size_t, Rng&);

/// User-chosen string of distinct ring characters. Never persisted.
class RandomString {
 public:
  /// Validates `text` against `hcl`: length >= 2, alphabet members only, no
  /// repeats. Throws ValidationError otherwise. Uppercase is rejected.
  static RandomString parse(const HoneyCircularList& hcl, std::string_view text);

  std::size_t size() const noexcept { return chars_.size(); }
  std::string_view str() const noexcept { return chars_; }
  char operator[](std::size_t i) const noexcept { return chars_[i]; }
  char front() const noexcept { return chars_.front(); }

  /// Overwrites the characters in place before release.
  void scrub() noexcept;

  friend bool operator==(const RandomString&, const RandomString&) = default;
  friend auto operator<=>(const RandomString&, const RandomString&) = default;

 private:
  explicit RandomString(std::string chars) : chars_(std::move(chars)) {}
  friend std::optional<RandomString> try_derive_rs(const HoneyCircularList&, char,
                                                   const DistanceChain&);
  friend RandomString random_rs(const HoneyCircularList&, std::size_t, Rng&);

  std::string chars_;
};

/// Clockwise distances between consecutive RS characters. The only
/// RS-derived value stored by the vault.
class DistanceChain {
 public:
  DistanceChain() = default;
  explicit DistanceChain(std::vector<int> distances) : distances_(std::move(distances)) {}

  /// Parses "d1-d2-...", decimal, no whitespace. Throws FormatError.
  static DistanceChain parse(std::string_view text);

  /// "35-6" style encoding.
  std::string to_string() const;

  const std::vector<int>& distances() const noexcept { return distances_; }
  std::size_t size() const noexcept { return distances_.size(); }

  /// True when every entry is in [1, ring_size - 1].
  bool entries_in_range(std::size_t ring_size) const noexcept;

  /// True when the cumulative offsets 0, d1, d1+d2, ... are pairwise distinct
  /// modulo ring_size, i.e. every start cell yields a valid walk.
  bool offsets_distinct(std::size_t ring_size) const;

  friend bool operator==(const DistanceChain&, const DistanceChain&) = default;

 private:
  std::vector<int> distances_;
};

/// Clockwise cell count from e1 to e2; 0 iff e1 == e2. Throws DomainError
/// for non-members.
int paired_distance(const HoneyCircularList& hcl, char e1, char e2);

DistanceChain distance_chain(const HoneyCircularList& hcl, const RandomString& rs);

/// Walks clockwise from `first`. Empty result when the walk revisits a cell.
/// Throws DomainError when `first` is not a member or an entry is out of range.
std::optional<RandomString> try_derive_rs(const HoneyCircularList& hcl, char first,
                                          const DistanceChain& chain);

/// As try_derive_rs, but a revisiting walk throws InvalidChainError.
RandomString derive_rs(const HoneyCircularList& hcl, char first, const DistanceChain& chain);

/// Every RS consistent with `chain`, one per collision-free start cell, in
/// ring order from index 0. At most hcl.size() entries.
std::vector<RandomString> enumerate_candidates(const HoneyCircularList& hcl,
                                               const DistanceChain& chain);

/// Uniformly random distinct-character string of `length` over the ring alphabet.
RandomString random_rs(const HoneyCircularList& hcl, std::size_t length, Rng& rng);

}  // namespace pdp

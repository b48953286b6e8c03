#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "pdp/random.hpp"

namespace pdp {

/// The full character set: lowercase letters followed by digits.
inline constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
inline constexpr std::size_t kDefaultRingSize = kAlphabet.size();
inline constexpr std::size_t kMinRingSize = 2;

/// Alphabet for a ring of `size` cells: the first `size` characters of kAlphabet.
/// Sizes below 36 exist for exhaustive toy-scale checks.
std::string_view alphabet_for(std::size_t size);

/// Honey circular list: a secret clockwise ordering of the alphabet.
///
/// Every alphabet character occupies exactly one cell, so position lookup is
/// total. Cell indices run clockwise from 0 and wrap modulo size().
class HoneyCircularList {
 public:
  /// Parses the text encoding (ring characters concatenated clockwise from
  /// index 0). Throws FormatError unless the text is a permutation of
  /// alphabet_for(text.size()).
  static HoneyCircularList parse(std::string_view ring);

  /// Alphabet-order ring. Test fixture only.
  static HoneyCircularList canonical(std::size_t size = kDefaultRingSize);

  std::size_t size() const noexcept { return ring_.size(); }
  std::string_view str() const noexcept { return ring_; }
  std::string_view alphabet() const noexcept { return alphabet_for(ring_.size()); }

  /// Character at `index` modulo size().
  char at(std::size_t index) const noexcept { return ring_[index % ring_.size()]; }

  bool contains(char c) const noexcept;

  /// Throws DomainError when `c` is not an alphabet member.
  std::size_t index_of(char c) const;

  friend bool operator==(const HoneyCircularList& a, const HoneyCircularList& b) noexcept {
    return a.ring_ == b.ring_;
  }

 private:
  explicit HoneyCircularList(std::string ring);

  std::string ring_;
  std::array<std::int8_t, 128> index_{};
};

/// Uniformly random ring over alphabet_for(size).
HoneyCircularList generate_hcl(Rng& rng, std::size_t size = kDefaultRingSize);

}  // namespace pdp

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pdp::meter {

enum class Strength { Strong, Weak };

enum class Reason { DictionaryWord, ConcatenationMakesWord, SequentialPattern, RepeatedCharacter };

std::string_view to_string(Strength s) noexcept;
std::string_view to_string(Reason r) noexcept;

struct Verdict {
  Strength strength = Strength::Strong;
  std::vector<Reason> reasons;

  bool weak() const noexcept { return !reasons.empty(); }
  bool has(Reason r) const noexcept;
  /// RepeatedCharacter is the only reason that blocks registration.
  bool blocks_registration() const noexcept { return has(Reason::RepeatedCharacter); }
};

/// Immutable lowercase word set.
class Wordlist {
 public:
  Wordlist() = default;
  explicit Wordlist(std::vector<std::string> words);

  /// One word per line; blank lines and trailing '\r' are ignored.
  static Wordlist load(const std::filesystem::path& path);

  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Keyboard rows scanned for contiguous runs of length >= 3.
inline constexpr std::string_view kKeyboardRows[] = {"qwertyuiop", "asdfghjkl", "zxcvbnm",
                                                      "1234567890"};

bool is_sequential(std::string_view rs);

/// Binary strong/weak judgement of a random-string choice.
Verdict evaluate_rs(std::string_view rs, std::string_view password, const Wordlist& wordlist);

}  // namespace pdp::meter

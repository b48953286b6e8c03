#include "pdp/meter.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "pdp/error.hpp"
#include "pdp/hcl.hpp"

namespace pdp::meter {

std::string_view to_string(Strength s) noexcept {
  return s == Strength::Strong ? "Strong" : "Weak";
}

std::string_view to_string(Reason r) noexcept {
  switch (r) {
    case Reason::DictionaryWord: return "DictionaryWord";
    case Reason::ConcatenationMakesWord: return "ConcatenationMakesWord";
    case Reason::SequentialPattern: return "SequentialPattern";
    case Reason::RepeatedCharacter: return "RepeatedCharacter";
  }
  return "?";
}

bool Verdict::has(Reason r) const noexcept {
  return std::find(reasons.begin(), reasons.end(), r) != reasons.end();
}

Wordlist::Wordlist(std::vector<std::string> words) {
  for (auto& w : words) {
    if (!w.empty()) words_.insert(std::move(w));
  }
}

Wordlist Wordlist::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open wordlist: " + path.string());
  std::vector<std::string> words;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(std::move(line));
  }
  return Wordlist(std::move(words));
}

namespace {

bool has_repeat(std::string_view rs) {
  std::array<bool, 256> seen{};
  for (char c : rs) {
    auto& mark = seen[static_cast<unsigned char>(c)];
    if (mark) return true;
    mark = true;
  }
  return false;
}

// Letters and digits form separate runs: "xyz" and "789" qualify, "z01" does not.
bool alphabet_run(std::string_view rs) {
  if (rs.size() < 2) return false;
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  int step = 0;
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    const auto a = kAlphabet.find(rs[i]);
    const auto b = kAlphabet.find(rs[i + 1]);
    if (a == kAlphabet.npos || b == kAlphabet.npos) return false;
    if (is_digit(rs[i]) != is_digit(rs[i + 1])) return false;
    const int d = static_cast<int>(b) - static_cast<int>(a);
    if (d != 1 && d != -1) return false;
    if (i == 0) step = d;
    else if (d != step) return false;
  }
  return true;
}

bool keyboard_run(std::string_view rs) {
  if (rs.size() < 3) return false;
  for (std::string_view row : kKeyboardRows) {
    if (row.find(rs) != row.npos) return true;
    std::string reversed(row.rbegin(), row.rend());
    if (reversed.find(rs) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

bool is_sequential(std::string_view rs) { return alphabet_run(rs) || keyboard_run(rs); }

Verdict evaluate_rs(std::string_view rs, std::string_view password, const Wordlist& wordlist) {
  Verdict v;
  if (wordlist.contains(rs)) v.reasons.push_back(Reason::DictionaryWord);
  std::string joined(password);
  joined += rs;
  std::string flipped(rs);
  flipped += password;
  if (wordlist.contains(joined) || wordlist.contains(flipped)) {
    v.reasons.push_back(Reason::ConcatenationMakesWord);
  }
  if (is_sequential(rs)) v.reasons.push_back(Reason::SequentialPattern);
  if (has_repeat(rs)) v.reasons.push_back(Reason::RepeatedCharacter);
  v.strength = v.reasons.empty() ? Strength::Strong : Strength::Weak;
  return v;
}

}  // namespace pdp::meter

#include "pdp/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "pdp/error.hpp"

namespace pdp {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == s.npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || end != v.data() + v.size()) {
    throw FormatError("config: " + std::string(key) + " expects an unsigned integer");
  }
  return out;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config c;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == line.npos) {
      throw FormatError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "wordlist_path") c.wordlist_path = std::filesystem::path(std::string(value));
    else if (key == "rs_length") c.rs_length = parse_uint(key, value);
    else if (key == "hcl_size") c.hcl_size = parse_uint(key, value);
    else if (key == "rekey_threshold") c.rekey_threshold = parse_uint(key, value);
    else throw FormatError("config line " + std::to_string(lineno) + ": unknown key '" +
                           std::string(key) + "'");
  }
  if (c.hcl_size < kMinRingSize || c.hcl_size > kAlphabet.size()) {
    throw FormatError("config: hcl_size must be in [2, 36]");
  }
  if (c.rs_length < kMinRsLength || c.rs_length > c.hcl_size) {
    throw FormatError("config: rs_length must be in [2, hcl_size]");
  }
  if (c.rekey_threshold < 1) throw FormatError("config: rekey_threshold must be positive");
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Config Config::from_environment() {
  if (const char* p = std::getenv("PDP_CONFIG"); p && *p) return load(p);
  return Config{};
}

}  // namespace pdp

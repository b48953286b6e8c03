#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "pdp/chain.hpp"
#include "pdp/federation.hpp"
#include "pdp/hcl.hpp"

namespace pdp {

/// Optional `key=value` configuration; '#' starts a comment line.
struct Config {
  std::optional<std::filesystem::path> wordlist_path;
  std::size_t rs_length = kDefaultRsLength;
  std::size_t hcl_size = kDefaultRingSize;
  std::uint64_t rekey_threshold = federation::kDefaultRekeyThreshold;

  /// Throws FormatError on unknown keys or bad values.
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);
  /// Loads $PDP_CONFIG when set, defaults otherwise.
  static Config from_environment();
};

}  // namespace pdp

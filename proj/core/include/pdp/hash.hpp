#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdp {

/// Salted password digest H(salt || password).
class PasswordHasher {
 public:
  virtual ~PasswordHasher() = default;
  virtual std::string_view name() const noexcept = 0;
  virtual std::vector<std::uint8_t> digest(std::span<const std::uint8_t> salt,
                                           std::string_view password) const = 0;
};

/// SHA-256 over salt || password.
class Sha256Hasher final : public PasswordHasher {
 public:
  std::string_view name() const noexcept override { return "sha256"; }
  std::vector<std::uint8_t> digest(std::span<const std::uint8_t> salt,
                                   std::string_view password) const override;
};

const PasswordHasher& default_hasher();

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Lowercase or uppercase hex; throws FormatError on odd length or bad digits.
std::vector<std::uint8_t> from_hex(std::string_view hex);

/// Constant-time equality for equal-length inputs.
bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) noexcept;

}  // namespace pdp

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pdp/chain.hpp"
#include "pdp/hash.hpp"
#include "pdp/hcl.hpp"
#include "pdp/honeychecker.hpp"
#include "pdp/meter.hpp"
#include "pdp/random.hpp"

namespace pdp::vault {

inline constexpr std::size_t kSaltBytes = 16;
inline constexpr std::string_view kFileMagic = "#PDPv1";

/// One row of password file F. Holds no RS characters.
struct UserRecord {
  std::string username;
  std::string salt_hex;
  std::string hash_hex;
  DistanceChain chain;

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

/// Password file F.
///
///   #PDPv1 <ring>
///   <username>:<salt-hex>:<hash-hex>:<d1-d2-...>
///
/// Records keep file order so that parse/serialize round-trips byte for byte.
struct PasswordFile {
  HoneyCircularList hcl = HoneyCircularList::canonical();
  std::vector<UserRecord> records;

  std::string serialize() const;
  /// Throws FormatError on a bad header, unknown version, malformed or
  /// duplicate record, or a chain that no valid RS can produce.
  static PasswordFile parse(std::string_view text);

  void save(const std::filesystem::path& path) const;
  static PasswordFile load(const std::filesystem::path& path);
};

enum class Verdict { Granted, DeniedWrongPassword, DeniedChainMismatch, AlarmHoneyRS };

std::string_view to_string(Verdict v) noexcept;

struct LoginOutcome {
  Verdict verdict = Verdict::DeniedWrongPassword;
  /// Set only when the honeychecker was consulted.
  std::optional<checker::Feedback> feedback;
};

struct AlarmEvent {
  std::uint64_t sequence = 0;
  std::string username;
};

struct Registration {
  UserRecord record;
  std::optional<meter::Verdict> meter;  ///< set when a wordlist was configured
};

/// The authentication system: owns F and talks to a honeychecker.
///
/// Single writer. The vault never retains a submitted RS past the call that
/// received it.
class Vault {
 public:
  struct Options {
    std::size_t rs_length = kDefaultRsLength;
    const PasswordHasher* hasher = nullptr;      ///< default_hasher() when null
    ByteSource* salts = nullptr;                 ///< system CSPRNG when null
    const meter::Wordlist* wordlist = nullptr;   ///< meter is skipped when null
  };

  Vault(HoneyCircularList hcl, checker::CheckerClient& checker, Options options);
  Vault(HoneyCircularList hcl, checker::CheckerClient& checker)
      : Vault(std::move(hcl), checker, Options{}) {}
  /// Throws FormatError when a stored chain does not have rs_length - 1 entries.
  Vault(PasswordFile file, checker::CheckerClient& checker, Options options);

  /// Stores the record, SETs the first RS character at the checker and drops
  /// the RS. Throws ValidationError on a duplicate or invalid username, an
  /// invalid RS, or an RS of the wrong length. Weak meter verdicts only warn.
  Registration register_user(std::string_view username, std::string_view password,
                             std::string_view rs);

  /// Password check, then chain check, then honeychecker. Throws
  /// ValidationError for an unknown username.
  LoginOutcome login(std::string_view username, std::string_view password, std::string_view rs);

  const UserRecord* find(std::string_view username) const;
  const std::vector<UserRecord>& records() const noexcept { return records_; }
  const HoneyCircularList& hcl() const noexcept { return hcl_; }
  std::size_t rs_length() const noexcept { return options_.rs_length; }
  checker::CheckerClient& checker() noexcept { return checker_; }

  /// Replaces the ring and every chain at once. `chains[i]` belongs to records()[i].
  void adopt(HoneyCircularList next, std::vector<DistanceChain> chains);

  PasswordFile snapshot() const;

  const std::vector<AlarmEvent>& alarms() const noexcept { return alarms_; }
  std::uint64_t chain_mismatches() const noexcept { return chain_mismatches_; }

 private:
  const PasswordHasher& hasher() const;

  HoneyCircularList hcl_;
  checker::CheckerClient& checker_;
  Options options_;
  SystemByteSource system_salts_;
  std::vector<UserRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<AlarmEvent> alarms_;
  std::uint64_t chain_mismatches_ = 0;
  std::uint64_t sequence_ = 0;
};

}  // namespace pdp::vault

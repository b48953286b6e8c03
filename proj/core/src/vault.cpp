#include "pdp/vault.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "pdp/error.hpp"

namespace pdp::vault {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Granted: return "Granted";
    case Verdict::DeniedWrongPassword: return "DeniedWrongPassword";
    case Verdict::DeniedChainMismatch: return "DeniedChainMismatch";
    case Verdict::AlarmHoneyRS: return "AlarmHoneyRS";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// File F

std::string PasswordFile::serialize() const {
  std::string out;
  out += kFileMagic;
  out += ' ';
  out += hcl.str();
  out += '\n';
  for (const auto& r : records) {
    out += r.username;
    out += ':';
    out += r.salt_hex;
    out += ':';
    out += r.hash_hex;
    out += ':';
    out += r.chain.to_string();
    out += '\n';
  }
  return out;
}

namespace {

[[noreturn]] void bad_line(std::size_t lineno, const std::string& what) {
  throw FormatError("password file line " + std::to_string(lineno) + ": " + what);
}

bool is_hex(std::string_view s) {
  return !s.empty() && s.size() % 2 == 0 &&
         s.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

UserRecord parse_record(std::string_view line, std::size_t lineno, const HoneyCircularList& hcl) {
  std::array<std::string_view, 4> fields;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto colon = line.find(':', pos);
    const bool last = i + 1 == fields.size();
    if (last != (colon == line.npos)) bad_line(lineno, "expected 4 ':'-separated fields");
    fields[i] = line.substr(pos, last ? line.npos : colon - pos);
    pos = colon + 1;
  }
  UserRecord r;
  r.username = fields[0];
  if (!checker::valid_username(r.username)) bad_line(lineno, "invalid username");
  if (fields[1].size() != 2 * kSaltBytes || !is_hex(fields[1])) bad_line(lineno, "invalid salt");
  if (!is_hex(fields[2])) bad_line(lineno, "invalid hash");
  r.salt_hex = fields[1];
  r.hash_hex = fields[2];
  try {
    r.chain = DistanceChain::parse(fields[3]);
  } catch (const FormatError& e) {
    bad_line(lineno, e.what());
  }
  if (r.chain.size() == 0 || !r.chain.entries_in_range(hcl.size()) ||
      !r.chain.offsets_distinct(hcl.size())) {
    bad_line(lineno, "chain " + std::string(fields[3]) + " cannot come from a valid RS");
  }
  return r;
}

}  // namespace

PasswordFile PasswordFile::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    lines.push_back(text.substr(pos, nl == text.npos ? text.npos : nl - pos));
    if (nl == text.npos) break;
    pos = nl + 1;
  }
  if (lines.empty()) throw FormatError("password file is empty");

  const auto header = lines.front();
  const auto space = header.find(' ');
  if (header.empty() || header.front() != '#' || space == header.npos) {
    throw FormatError("password file header must be '#PDPv1 <hcl>'");
  }
  if (header.substr(0, space) != kFileMagic) {
    throw FormatError("unknown password file version: " + std::string(header.substr(0, space)));
  }
  PasswordFile file;
  file.hcl = HoneyCircularList::parse(header.substr(space + 1));

  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) bad_line(i + 1, "empty line");
    auto record = parse_record(lines[i], i + 1, file.hcl);
    if (!seen.emplace(record.username, i).second) {
      bad_line(i + 1, "duplicate username '" + record.username + "'");
    }
    file.records.push_back(std::move(record));
  }
  return file;
}

void PasswordFile::save(const std::filesystem::path& path) const {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write password file: " + tmp);
    out << serialize();
    if (!out.flush()) throw Error("cannot write password file: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

PasswordFile PasswordFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read password file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

// ---------------------------------------------------------------------------
// Vault

Vault::Vault(HoneyCircularList hcl, checker::CheckerClient& checker, Options options)
    : hcl_(std::move(hcl)), checker_(checker), options_(options) {
  if (options_.rs_length < kMinRsLength || options_.rs_length > hcl_.size()) {
    throw DomainError("rs_length must be in [2, ring size]");
  }
}

Vault::Vault(PasswordFile file, checker::CheckerClient& checker, Options options)
    : Vault(std::move(file.hcl), checker, options) {
  for (auto& r : file.records) {
    if (r.chain.size() != options_.rs_length - 1) {
      throw FormatError("chain of '" + r.username + "' does not match rs_length " +
                        std::to_string(options_.rs_length));
    }
    if (!index_.emplace(r.username, records_.size()).second) {
      throw FormatError("duplicate username '" + r.username + "'");
    }
    records_.push_back(std::move(r));
  }
}

const PasswordHasher& Vault::hasher() const {
  return options_.hasher ? *options_.hasher : default_hasher();
}

Registration Vault::register_user(std::string_view username, std::string_view password,
                                  std::string_view rs_text) {
  if (!checker::valid_username(username)) {
    throw ValidationError("username must be non-empty without ':' or whitespace");
  }
  if (index_.contains(std::string(username))) {
    throw ValidationError("username already registered: " + std::string(username));
  }
  auto rs = RandomString::parse(hcl_, rs_text);
  if (rs.size() != options_.rs_length) {
    throw ValidationError("random string must have " + std::to_string(options_.rs_length) +
                          " characters");
  }

  Registration out;
  if (options_.wordlist) out.meter = meter::evaluate_rs(rs_text, password, *options_.wordlist);

  std::array<std::uint8_t, kSaltBytes> salt{};
  (options_.salts ? *options_.salts : system_salts_).fill(salt);

  UserRecord record;
  record.username = username;
  record.salt_hex = to_hex(salt);
  record.hash_hex = to_hex(hasher().digest(salt, password));
  record.chain = distance_chain(hcl_, rs);

  checker_.set(username, rs.front());
  rs.scrub();

  index_.emplace(record.username, records_.size());
  records_.push_back(record);
  out.record = std::move(record);
  return out;
}

LoginOutcome Vault::login(std::string_view username, std::string_view password,
                          std::string_view rs_text) {
  const auto it = index_.find(std::string(username));
  if (it == index_.end()) throw ValidationError("unknown user: " + std::string(username));
  const auto& record = records_[it->second];

  const auto salt = from_hex(record.salt_hex);
  const auto expected = from_hex(record.hash_hex);
  if (!constant_time_equal(hasher().digest(salt, password), expected)) {
    return {Verdict::DeniedWrongPassword, std::nullopt};
  }

  // Malformed submissions are indistinguishable from a wrong chain.
  std::optional<RandomString> rs;
  try {
    rs = RandomString::parse(hcl_, rs_text);
  } catch (const ValidationError&) {
  }
  if (!rs || rs->size() != options_.rs_length || distance_chain(hcl_, *rs) != record.chain) {
    ++chain_mismatches_;
    if (rs) rs->scrub();
    return {Verdict::DeniedChainMismatch, std::nullopt};
  }

  const char first = rs->front();
  rs->scrub();
  const auto feedback = checker_.check(username, first);
  switch (feedback) {
    case checker::Feedback::Pos:
      return {Verdict::Granted, feedback};
    case checker::Feedback::Neg:
      alarms_.push_back({++sequence_, record.username});
      return {Verdict::AlarmHoneyRS, feedback};
    case checker::Feedback::Unknown:
      break;
  }
  throw Error("honeychecker has no record for '" + record.username + "'");
}

const UserRecord* Vault::find(std::string_view username) const {
  const auto it = index_.find(std::string(username));
  return it == index_.end() ? nullptr : &records_[it->second];
}

void Vault::adopt(HoneyCircularList next, std::vector<DistanceChain> chains) {
  if (chains.size() != records_.size()) throw DomainError("one chain per record required");
  if (next.size() != hcl_.size()) throw DomainError("replacement ring has a different size");
  for (const auto& c : chains) {
    if (c.size() != options_.rs_length - 1 || !c.entries_in_range(next.size())) {
      throw DomainError("replacement chain invalid: " + c.to_string());
    }
  }
  hcl_ = std::move(next);
  for (std::size_t i = 0; i < records_.size(); ++i) records_[i].chain = std::move(chains[i]);
}

PasswordFile Vault::snapshot() const { return PasswordFile{hcl_, records_}; }

}  // namespace pdp::vault

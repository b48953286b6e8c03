#include "pdp/honeychecker.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "pdp/error.hpp"

namespace pdp::checker {

std::string_view to_string(Feedback f) noexcept {
  switch (f) {
    case Feedback::Pos: return "POS";
    case Feedback::Neg: return "NEG";
    case Feedback::Unknown: return "UNKNOWN";
  }
  return "?";
}

bool valid_username(std::string_view username) noexcept {
  if (username.empty()) return false;
  return std::none_of(username.begin(), username.end(), [](char c) {
    return c == ':' || std::isspace(static_cast<unsigned char>(c)) || std::iscntrl(static_cast<unsigned char>(c));
  });
}

bool valid_first_char(char c) noexcept { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

std::optional<char> CheckerClient::recover_first_char(std::string_view username,
                                                      std::string_view alphabet) {
  for (char c : alphabet) {
    switch (check(username, c)) {
      case Feedback::Pos: return c;
      case Feedback::Unknown: return std::nullopt;
      case Feedback::Neg: break;
    }
  }
  return std::nullopt;
}

void CheckerStore::set(std::string_view username, char first_char) {
  if (!valid_username(username)) throw ValidationError("invalid username");
  if (!valid_first_char(first_char)) throw ValidationError("invalid character");
  std::lock_guard lock(mu_);
  records_.insert_or_assign(std::string(username), first_char);
}

Feedback CheckerStore::check(std::string_view username, char first_char) const {
  std::lock_guard lock(mu_);
  const auto it = records_.find(username);
  if (it == records_.end()) return Feedback::Unknown;
  return it->second == first_char ? Feedback::Pos : Feedback::Neg;
}

void CheckerStore::erase(std::string_view username) {
  std::lock_guard lock(mu_);
  if (const auto it = records_.find(username); it != records_.end()) records_.erase(it);
}

std::size_t CheckerStore::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::string CheckerStore::snapshot() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& [user, c] : records_) {
    out += "SET ";
    out += user;
    out += ' ';
    out += c;
    out += '\n';
  }
  return out;
}

void CheckerStore::restore(std::string_view text) {
  std::map<std::string, char, std::less<>> loaded;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string verb, user, ch, extra;
    fields >> verb >> user >> ch;
    if (verb != "SET" || !valid_username(user) || ch.size() != 1 || !valid_first_char(ch[0]) ||
        (fields >> extra)) {
      throw FormatError("checker snapshot line " + std::to_string(lineno) + " malformed");
    }
    loaded.insert_or_assign(user, ch[0]);
  }
  std::lock_guard lock(mu_);
  records_ = std::move(loaded);
}

void CheckerStore::save(const std::filesystem::path& path) const {
  const auto text = snapshot();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checker snapshot: " + path.string());
  out << text;
}

void CheckerStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read checker snapshot: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  restore(buf.str());
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto sp = line.find(' ', pos);
    out.push_back(line.substr(pos, sp == line.npos ? line.npos : sp - pos));
    if (sp == line.npos) break;
    pos = sp + 1;
  }
  return out;
}

}  // namespace

std::string CheckerService::handle(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.empty()) return "ERR empty request";
  const auto parts = split_spaces(line);
  const auto verb = parts[0];

  auto arity = [&](std::size_t n) { return parts.size() == n; };
  auto username_ok = [&] { return valid_username(parts[1]); };
  auto char_ok = [&] { return parts[2].size() == 1 && valid_first_char(parts[2][0]); };

  if (verb == "SET" || verb == "CHECK") {
    if (!arity(3)) return "ERR expected 2 arguments";
    if (!username_ok()) return "ERR invalid username";
    if (!char_ok()) return "ERR invalid character";
    if (verb == "SET") {
      store_.set(parts[1], parts[2][0]);
      if (on_change_) on_change_();
      return "OK";
    }
    return std::string(to_string(store_.check(parts[1], parts[2][0])));
  }
  if (verb == "DEL") {
    if (!arity(2)) return "ERR expected 1 argument";
    if (!username_ok()) return "ERR invalid username";
    store_.erase(parts[1]);
    if (on_change_) on_change_();
    return "OK";
  }
  return "ERR unknown command";
}

}  // namespace pdp::checker

#include "pdp/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "pdp/error.hpp"
#include "pdp/honeychecker.hpp"

namespace pdp::adversary {

double AttackReport::estimated_probability() const noexcept {
  return trials ? static_cast<double>(detections) / static_cast<double>(trials) : 0.0;
}

double AttackReport::half_width() const noexcept {
  if (!trials) return 0.0;
  const double p = estimated_probability();
  return kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double AttackReport::success_rate() const noexcept {
  return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
}

void for_each_distinct_string(std::string_view alphabet, std::size_t length,
                              const std::function<void(std::string_view)>& fn) {
  if (length > alphabet.size()) return;
  std::string current;
  current.reserve(length);
  std::vector<bool> used(alphabet.size(), false);
  auto recurse = [&](auto& self) -> void {
    if (current.size() == length) {
      fn(current);
      return;
    }
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      current.push_back(alphabet[i]);
      self(self);
      current.pop_back();
      used[i] = false;
    }
  };
  recurse(recurse);
}

std::uint64_t distinct_string_count(std::size_t ring_size, std::size_t length) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (ring_size < i) return 0;
    n *= ring_size - i;
  }
  return n;
}

namespace {

enum class Outcome { Granted, Alarm, Denied };

Outcome classify(const vault::LoginOutcome& o) {
  switch (o.verdict) {
    case vault::Verdict::Granted: return Outcome::Granted;
    case vault::Verdict::AlarmHoneyRS: return Outcome::Alarm;
    default: return Outcome::Denied;
  }
}

std::string random_password(Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string pw(10, ' ');
  for (auto& c : pw) c = kAlphabet[pick(rng)];
  return pw;
}

/// Harness state owned by one worker. A fresh vault per trial keeps memory
/// flat; the checker store is reused because SET upserts.
struct Workbench {
  Workbench(const HoneyCircularList& ring, std::size_t rs_length, std::uint64_t salt_seed)
      : hcl(ring), salts(salt_seed) {
    options.rs_length = rs_length;
    options.salts = &salts;
  }

  vault::Vault fresh_vault() { return vault::Vault(hcl, client, options); }

  HoneyCircularList hcl;
  checker::CheckerStore store;
  checker::LocalChecker client{store};
  SeededByteSource salts;
  vault::Vault::Options options;
};

using TrialFn = std::function<Outcome(Workbench&, Rng&)>;

AttackReport run_trials(std::string name, std::uint64_t trials, const HoneyCircularList& hcl,
                        std::uint64_t seed, const SimulationOptions& options, const TrialFn& trial) {
  if (trials == 0) throw DomainError("trials must be at least 1");
  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, trials));

  struct Tally {
    std::uint64_t alarms = 0, granted = 0;
  };
  std::vector<Tally> tallies(workers);
  auto work = [&](unsigned w) {
    Workbench bench(hcl, options.rs_length, splitmix64(seed) ^ w);
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) {
      auto rng = stream_rng(seed, i);
      switch (trial(bench, rng)) {
        case Outcome::Alarm: ++tallies[w].alarms; break;
        case Outcome::Granted: ++tallies[w].granted; break;
        case Outcome::Denied: break;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  AttackReport report;
  report.name = std::move(name);
  report.trials = trials;
  for (const auto& t : tallies) {
    report.detections += t.alarms;
    report.successes += t.granted;
  }
  return report;
}

constexpr std::string_view kVictim = "victim";

}  // namespace

AttackReport simulate_inversion_attack(std::uint64_t trials, const HoneyCircularList& hcl,
                                       std::uint64_t seed, Attacker attacker,
                                       SimulationOptions options) {
  return run_trials("inversion", trials, hcl, seed, options, [attacker](Workbench& b, Rng& rng) {
    auto vault = b.fresh_vault();
    const auto password = random_password(rng);
    auto rs = random_rs(b.hcl, vault.rs_length(), rng);
    vault.register_user(kVictim, password, rs.str());

    // The adversary sees the stored record and the ring, nothing else.
    const auto candidates = enumerate_candidates(vault.hcl(), vault.find(kVictim)->chain);
    const RandomString* guess = nullptr;
    if (attacker == Attacker::FirstCharOracle) {
      for (const auto& c : candidates) {
        if (c.front() == rs.front()) guess = &c;
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      guess = &candidates[pick(rng)];
    }
    return classify(vault.login(kVictim, password, guess->str()));
  });
}

Rational exhaustive_inversion_attack(const HoneyCircularList& hcl, std::size_t rs_length) {
  Workbench bench(hcl, rs_length, 0);
  Rational r{0, 0};
  for_each_distinct_string(hcl.alphabet(), rs_length, [&](std::string_view rs) {
    auto vault = bench.fresh_vault();
    vault.register_user(kVictim, "password", rs);
    for (const auto& c : enumerate_candidates(hcl, vault.find(kVictim)->chain)) {
      ++r.den;
      if (classify(vault.login(kVictim, "password", c.str())) == Outcome::Alarm) ++r.num;
    }
  });
  return r;
}

Rational dos_probability_exact(std::size_t ring_size, std::size_t rs_length,
                               const DistanceChain& chain) {
  if (rs_length > ring_size) throw DomainError("rs_length exceeds ring size");
  if (rs_length < kMinRsLength) throw DomainError("rs_length must be at least 2");
  if (chain.size() + 1 != rs_length) throw DomainError("chain length must be rs_length - 1");
  if (!chain.entries_in_range(ring_size)) throw DomainError("chain entry out of range");

  const auto ring = HoneyCircularList::canonical(ring_size);
  std::uint64_t total = 0, matches = 0;
  for_each_distinct_string(ring.alphabet(), rs_length, [&](std::string_view s) {
    ++total;
    if (distance_chain(ring, RandomString::parse(ring, s)) == chain) ++matches;
  });
  // One matching string is the victim's own; the rest trigger a false alarm.
  return Rational{matches ? matches - 1 : 0, total};
}

double dos_formula_literal(std::size_t ring_size, std::size_t rs_length) {
  double sum = 0;
  for (std::size_t i = 0; i < rs_length; ++i) sum += 1.0 / static_cast<double>(ring_size - i);
  return static_cast<double>(ring_size - 1) * sum;
}

AttackReport simulate_dos(std::uint64_t trials, const HoneyCircularList& hcl, std::uint64_t seed,
                          SimulationOptions options) {
  return run_trials("dos", trials, hcl, seed, options, [](Workbench& b, Rng& rng) {
    auto vault = b.fresh_vault();
    const auto password = random_password(rng);
    vault.register_user(kVictim, password, random_rs(b.hcl, vault.rs_length(), rng).str());
    const auto guess = random_rs(b.hcl, vault.rs_length(), rng);
    return classify(vault.login(kVictim, password, guess.str()));
  });
}

Rational exhaustive_dos(const HoneyCircularList& hcl, std::size_t rs_length) {
  Workbench bench(hcl, rs_length, 0);
  Rational r{0, 0};
  for_each_distinct_string(hcl.alphabet(), rs_length, [&](std::string_view victim) {
    auto vault = bench.fresh_vault();
    vault.register_user(kVictim, "password", victim);
    for_each_distinct_string(hcl.alphabet(), rs_length, [&](std::string_view guess) {
      ++r.den;
      if (classify(vault.login(kVictim, "password", guess)) == Outcome::Alarm) ++r.num;
    });
  });
  return r;
}

std::string_view to_string(TypoModel m) noexcept {
  return m == TypoModel::SingleCharSubstitution ? "single-char-substitution"
                                                : "all-chars-wrong-uniform";
}

AttackReport simulate_typo(std::uint64_t trials, TypoModel model, const HoneyCircularList& hcl,
                           std::uint64_t seed, SimulationOptions options) {
  return run_trials(std::string("typo-") + std::string(to_string(model)), trials, hcl, seed,
                    options, [model](Workbench& b, Rng& rng) {
                      auto vault = b.fresh_vault();
                      const auto password = random_password(rng);
                      const auto rs = random_rs(b.hcl, vault.rs_length(), rng);
                      vault.register_user(kVictim, password, rs.str());
                      std::string typed;
                      if (model == TypoModel::SingleCharSubstitution) {
                        typed = rs.str();
                        std::uniform_int_distribution<std::size_t> pos(0, typed.size() - 1);
                        std::uniform_int_distribution<std::size_t> chr(0, b.hcl.size() - 2);
                        const auto p = pos(rng);
                        // Skip over the original character to pick one of the L-1 others.
                        auto alphabet = b.hcl.alphabet();
                        auto idx = chr(rng);
                        if (idx >= alphabet.find(typed[p])) ++idx;
                        typed[p] = alphabet[idx];
                      } else {
                        typed = random_rs(b.hcl, vault.rs_length(), rng).str();
                      }
                      return classify(vault.login(kVictim, password, typed));
                    });
}

std::uint64_t single_substitution_matches(const HoneyCircularList& hcl, const RandomString& rs) {
  const auto stored = distance_chain(hcl, rs);
  std::uint64_t matches = 0;
  for (std::size_t p = 0; p < rs.size(); ++p) {
    for (char c : hcl.alphabet()) {
      if (c == rs[p]) continue;
      std::string typed(rs.str());
      typed[p] = c;
      try {
        if (distance_chain(hcl, RandomString::parse(hcl, typed)) == stored) ++matches;
      } catch (const ValidationError&) {
        // repeated character: the vault rejects it before the checker
      }
    }
  }
  return matches;
}

Rational exhaustive_typo(const HoneyCircularList& hcl, std::size_t rs_length, TypoModel model) {
  if (model == TypoModel::AllCharsWrongUniform) return exhaustive_dos(hcl, rs_length);
  Workbench bench(hcl, rs_length, 0);
  Rational r{0, 0};
  for_each_distinct_string(hcl.alphabet(), rs_length, [&](std::string_view rs) {
    auto vault = bench.fresh_vault();
    vault.register_user(kVictim, "password", rs);
    for (std::size_t p = 0; p < rs.size(); ++p) {
      for (char c : hcl.alphabet()) {
        if (c == rs[p]) continue;
        std::string typed(rs);
        typed[p] = c;
        ++r.den;
        if (classify(vault.login(kVictim, "password", typed)) == Outcome::Alarm) ++r.num;
      }
    }
  });
  return r;
}

FlatnessReport flatness_check(const HoneyCircularList& hcl, const DistanceChain& chain,
                              const meter::Wordlist* wordlist) {
  FlatnessReport report;
  report.ring_size = hcl.size();
  report.collision_free = chain.offsets_distinct(hcl.size());
  const auto candidates = enumerate_candidates(hcl, chain);
  report.candidates = candidates.size();
  report.uniform = candidates.size() == hcl.size() &&
                   std::all_of(candidates.begin(), candidates.end(), [&](const auto& c) {
                     return distance_chain(hcl, c) == chain;
                   });
  if (wordlist) {
    report.dictionary_survivors = static_cast<std::size_t>(
        std::count_if(candidates.begin(), candidates.end(),
                      [&](const auto& c) { return wordlist->contains(c.str()); }));
  }
  return report;
}

CtdSweetwordList ctd_generate(std::string_view password, std::size_t k, std::uint64_t seed,
                              std::size_t tweak_digits) {
  std::size_t trailing = 0;
  while (trailing < password.size() &&
         std::isdigit(static_cast<unsigned char>(password[password.size() - 1 - trailing]))) {
    ++trailing;
  }
  if (trailing == 0) throw ValidationError("password must end in a digit");
  const std::size_t t = tweak_digits ? tweak_digits : std::min<std::size_t>(trailing, 3);
  if (t > trailing) throw ValidationError("password has fewer trailing digits than requested");
  if (t > 9) throw DomainError("at most 9 tweaked digits");
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < t; ++i) space *= 10;
  if (k < 1 || k > space) {
    throw DomainError("k must be in [1, " + std::to_string(space) + "]");
  }

  const auto prefix = password.substr(0, password.size() - t);
  auto render = [&](std::uint64_t v) {
    std::string digits(t, '0');
    for (std::size_t i = 0; i < t; ++i, v /= 10) digits[t - 1 - i] = static_cast<char>('0' + v % 10);
    return std::string(prefix) + digits;
  };

  auto rng = stream_rng(seed, 0xc7d);
  std::set<std::string> chosen{std::string(password)};
  std::uniform_int_distribution<std::uint64_t> pick(0, space - 1);
  std::vector<std::string> words{std::string(password)};
  while (words.size() < k) {
    auto w = render(pick(rng));
    if (chosen.insert(w).second) words.push_back(std::move(w));
  }
  std::shuffle(words.begin(), words.end(), rng);

  CtdSweetwordList out;
  out.correct_index = static_cast<std::size_t>(
      std::find(words.begin(), words.end(), password) - words.begin());
  out.sweetwords = std::move(words);
  return out;
}

Rational ctd_typo_probability(std::size_t k) {
  if (k < 1 || k > 10) throw DomainError("k must be in [1, 10] for last-digit tweaking");
  return Rational{k - 1, 9};
}

MsvReport simulate_msv(const vault::Vault& a, const vault::Vault& b, std::string_view username) {
  const auto* ra = a.find(username);
  const auto* rb = b.find(username);
  if (!ra || !rb) throw ValidationError("user not present in both vaults");
  MsvReport report;
  report.chains_identical = ra->chain.to_string() == rb->chain.to_string();
  const auto ca = enumerate_candidates(a.hcl(), ra->chain);
  const auto cb = enumerate_candidates(b.hcl(), rb->chain);
  report.candidates_a = ca.size();
  report.candidates_b = cb.size();
  std::set<std::string_view> sa;
  for (const auto& c : ca) sa.insert(c.str());
  report.intersection = static_cast<std::size_t>(
      std::count_if(cb.begin(), cb.end(), [&](const auto& c) { return sa.contains(c.str()); }));
  return report;
}

CtdMsvReport simulate_ctd_msv(std::string_view password, std::size_t k, std::uint64_t seeds,
                              std::uint64_t seed, std::size_t tweak_digits) {
  CtdMsvReport report;
  report.seeds = seeds;
  std::uint64_t total_intersection = 0;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const auto a = ctd_generate(password, k, splitmix64(seed ^ (2 * s)), tweak_digits);
    const auto b = ctd_generate(password, k, splitmix64(seed ^ (2 * s + 1)), tweak_digits);
    std::set<std::string> sa(a.sweetwords.begin(), a.sweetwords.end());
    std::vector<std::string> common;
    for (const auto& w : b.sweetwords) {
      if (sa.contains(w)) common.push_back(w);
    }
    total_intersection += common.size();
    if (common.size() == 1 && common.front() == password) ++report.isolated;
  }
  report.mean_intersection =
      seeds ? static_cast<double>(total_intersection) / static_cast<double>(seeds) : 0.0;
  return report;
}

}  // namespace pdp::adversary

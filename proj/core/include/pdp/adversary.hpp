#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdp/chain.hpp"
#include "pdp/hcl.hpp"
#include "pdp/meter.hpp"
#include "pdp/vault.hpp"

namespace pdp::adversary {

__extension__ using Uint128 = unsigned __int128;

/// Exact ratio of event counts. Not reduced, so "35/42840" reads as the
/// count it came from; equality compares values.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return static_cast<Uint128>(a.num) * b.den ==
           static_cast<Uint128>(b.num) * a.den;
  }
};

/// Two-sided normal quantile for 99% confidence.
inline constexpr double kZ99 = 2.5758293035489004;

struct AttackReport {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t detections = 0;  ///< honeychecker NEG (alarm raised)
  std::uint64_t successes = 0;   ///< login granted

  /// detections / trials
  double estimated_probability() const noexcept;
  /// 99% normal-approximation half-width of estimated_probability().
  double half_width() const noexcept;
  double success_rate() const noexcept;
};

/// Calls `fn` for every string of `length` distinct characters drawn from
/// `alphabet`, in lexicographic order of alphabet positions.
void for_each_distinct_string(std::string_view alphabet, std::size_t length,
                              const std::function<void(std::string_view)>& fn);

/// L * (L-1) * ... * (L-length+1).
std::uint64_t distinct_string_count(std::size_t ring_size, std::size_t length);

// ---------------------------------------------------------------------------
// Inversion attack: the adversary holds F and the ring, has inverted every
// password, and guesses among the candidate random strings.

enum class Attacker {
  UniformCandidate,  ///< picks a candidate uniformly at random
  FirstCharOracle,   ///< has also compromised the honeychecker
};

struct SimulationOptions {
  std::size_t rs_length = kDefaultRsLength;
  unsigned workers = 0;  ///< 0 = hardware concurrency
};

AttackReport simulate_inversion_attack(std::uint64_t trials, const HoneyCircularList& hcl,
                                       std::uint64_t seed, Attacker attacker = Attacker::UniformCandidate,
                                       SimulationOptions options = {});

/// Every RS on the ring, every candidate submitted once, through a real vault.
/// Returns alarms / submissions.
Rational exhaustive_inversion_attack(const HoneyCircularList& hcl, std::size_t rs_length);

// ---------------------------------------------------------------------------
// DoS: a uniformly chosen distinct-character string reproduces the stored
// chain with a first character other than the victim's.

/// Exact probability by enumeration over every distinct-character string of
/// length rs_length on a ring of ring_size cells. Throws DomainError when
/// rs_length > ring_size or the chain does not have rs_length - 1 entries
/// in range.
Rational dos_probability_exact(std::size_t ring_size, std::size_t rs_length,
                               const DistanceChain& chain);

/// The closed form as typeset, read as (L - 1) * sum_{i=0}^{l-1} 1/(L - i).
/// Reported next to the exact value; it does not equal it.
double dos_formula_literal(std::size_t ring_size, std::size_t rs_length);

/// Victim registered with a random RS; adversary submits the correct
/// password with a uniformly random distinct-character RS.
AttackReport simulate_dos(std::uint64_t trials, const HoneyCircularList& hcl, std::uint64_t seed,
                          SimulationOptions options = {});

/// Every (victim RS, submitted string) pair through a real vault.
Rational exhaustive_dos(const HoneyCircularList& hcl, std::size_t rs_length);

// ---------------------------------------------------------------------------
// Typo safety

enum class TypoModel {
  SingleCharSubstitution,  ///< one position replaced by a different character
  AllCharsWrongUniform,    ///< the whole RS garbled into a uniform distinct-character string
};

std::string_view to_string(TypoModel m) noexcept;

AttackReport simulate_typo(std::uint64_t trials, TypoModel model, const HoneyCircularList& hcl,
                           std::uint64_t seed, SimulationOptions options = {});

/// Substitutions (every position, every other alphabet character) whose
/// chain equals the original chain. Always zero.
std::uint64_t single_substitution_matches(const HoneyCircularList& hcl, const RandomString& rs);

/// Every RS and every typo the model allows, through a real vault.
/// Returns false alarms / attempts.
Rational exhaustive_typo(const HoneyCircularList& hcl, std::size_t rs_length, TypoModel model);

// ---------------------------------------------------------------------------
// Flatness

struct FlatnessReport {
  std::size_t ring_size = 0;
  std::size_t candidates = 0;
  bool collision_free = false;
  /// Every candidate reproduces the stored chain and there are ring_size of them.
  bool uniform = false;
  /// Candidates that are dictionary words, when a wordlist was given.
  std::optional<std::size_t> dictionary_survivors;

  /// True when an attacker can prefer fewer than ring_size candidates.
  bool degraded() const noexcept {
    return !uniform || (dictionary_survivors && *dictionary_survivors > 0 &&
                        *dictionary_survivors < ring_size);
  }
};

FlatnessReport flatness_check(const HoneyCircularList& hcl, const DistanceChain& chain,
                              const meter::Wordlist* wordlist = nullptr);

// ---------------------------------------------------------------------------
// Chaffing-by-tweaking-digits baseline

struct CtdSweetwordList {
  std::vector<std::string> sweetwords;
  std::size_t correct_index = 0;
};

/// k sweetwords: the password and k-1 decoys that differ only in the last
/// `tweak_digits` positions, all digits. `tweak_digits` = 0 tweaks every
/// trailing digit, up to three. Throws ValidationError when the password
/// has fewer trailing digits than requested, DomainError when k exceeds
/// 10^tweak_digits or is below 1.
CtdSweetwordList ctd_generate(std::string_view password, std::size_t k, std::uint64_t seed,
                              std::size_t tweak_digits = 0);

/// (k - 1) / 9: chance a single wrong final digit lands on a honeyword.
Rational ctd_typo_probability(std::size_t k);

// ---------------------------------------------------------------------------
// Multiple-system vulnerability

struct MsvReport {
  bool chains_identical = false;
  std::size_t candidates_a = 0;
  std::size_t candidates_b = 0;
  std::size_t intersection = 0;
};

/// Intersection attack on two compromised PDP vaults sharing `username`.
MsvReport simulate_msv(const vault::Vault& a, const vault::Vault& b, std::string_view username);

struct CtdMsvReport {
  std::uint64_t seeds = 0;
  std::uint64_t isolated = 0;  ///< intersections equal to {password}
  double mean_intersection = 0;

  double isolation_rate() const noexcept {
    return seeds ? static_cast<double>(isolated) / static_cast<double>(seeds) : 0.0;
  }
};

/// Two independently generated CTD lists per seed, intersected.
CtdMsvReport simulate_ctd_msv(std::string_view password, std::size_t k, std::uint64_t seeds,
                              std::uint64_t seed, std::size_t tweak_digits = 0);

}  // namespace pdp::adversary

#include "pdp/hcl.hpp"

#include <algorithm>
#include <string>

#include "pdp/error.hpp"

namespace pdp {

std::string_view alphabet_for(std::size_t size) {
  if (size < kMinRingSize || size > kAlphabet.size()) {
    throw DomainError("ring size must be in [2, 36], got " + std::to_string(size));
  }
  return kAlphabet.substr(0, size);
}

HoneyCircularList::HoneyCircularList(std::string ring) : ring_(std::move(ring)) {
  index_.fill(-1);
  for (std::size_t i = 0; i < ring_.size(); ++i) {
    index_[static_cast<unsigned char>(ring_[i])] = static_cast<std::int8_t>(i);
  }
}

HoneyCircularList HoneyCircularList::parse(std::string_view ring) {
  if (ring.size() < kMinRingSize || ring.size() > kAlphabet.size()) {
    throw FormatError("hcl must have between 2 and 36 characters, got " +
                      std::to_string(ring.size()));
  }
  std::string sorted(ring);
  std::sort(sorted.begin(), sorted.end());
  std::string expected(alphabet_for(ring.size()));
  std::sort(expected.begin(), expected.end());
  if (sorted != expected) {
    throw FormatError("hcl is not a permutation of its alphabet: " + std::string(ring));
  }
  return HoneyCircularList(std::string(ring));
}

HoneyCircularList HoneyCircularList::canonical(std::size_t size) {
  return HoneyCircularList(std::string(alphabet_for(size)));
}

bool HoneyCircularList::contains(char c) const noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u < index_.size() && index_[u] >= 0;
}

std::size_t HoneyCircularList::index_of(char c) const {
  if (!contains(c)) {
    throw DomainError(std::string("character not in ring alphabet: '") + c + "'");
  }
  return static_cast<std::size_t>(index_[static_cast<unsigned char>(c)]);
}

HoneyCircularList generate_hcl(Rng& rng, std::size_t size) {
  std::string ring(alphabet_for(size));
  std::shuffle(ring.begin(), ring.end(), rng);
  return HoneyCircularList::parse(ring);
}

}  // namespace pdp

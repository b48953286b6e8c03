#include "pdp/random.hpp"

#include <openssl/rand.h>

#include "pdp/error.hpp"

namespace pdp {

void SystemByteSource::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error("system random source failed");
  }
}

void SeededByteSource::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) b = static_cast<std::uint8_t>(rng_() >> 56);
}

}  // namespace pdp

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace pdp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent streams from one seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for stream `stream` of `seed`. Streams are independent of the
/// order in which they are created, so per-trial results do not depend on
/// how trials are partitioned across workers.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng{splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))};
}

/// Source of salt bytes.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Cryptographically secure bytes from the system CSPRNG.
class SystemByteSource final : public ByteSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Reproducible bytes for tests and seeded CLI runs. Not for production salts.
class SeededByteSource final : public ByteSource {
 public:
  explicit SeededByteSource(std::uint64_t seed) : rng_(stream_rng(seed, 0x5a17)) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  Rng rng_;
};

}  // namespace pdp

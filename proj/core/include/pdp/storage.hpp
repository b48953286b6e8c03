#pragma once

#include <cstdint>
#include <string>

#include "pdp/hcl.hpp"

namespace pdp {

/// Storage comparison between a k-sweetword honeyword system and PDP, in
/// units of theta (the cost of one stored password-equivalent).
struct StorageReport {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t theta = 1;
  std::uint64_t ring_size = kDefaultRingSize;

  std::uint64_t baseline_f = 0;    ///< n * k * theta
  std::uint64_t pdp_f = 0;         ///< 2 * n * theta (hash + chain)
  std::uint64_t hcl_cost = 0;      ///< L * theta, independent of n
  std::uint64_t checker_cost = 0;  ///< n * theta, same for both schemes
  std::uint64_t savings = 0;       ///< n * theta * (k - 2)
};

/// Throws DomainError for k < 2, theta == 0 or on overflow.
StorageReport storage_report(std::uint64_t n, std::uint64_t k, std::uint64_t theta = 1,
                             std::uint64_t ring_size = kDefaultRingSize);

/// Plain-text table followed by metric=<name> value=<v> lines.
std::string format_storage_report(const StorageReport& r);

}  // namespace pdp

#include "pdp/storage.hpp"

#include <sstream>

#include "pdp/error.hpp"

namespace pdp {

namespace {

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw DomainError("storage report overflows 64 bits");
  return out;
}

}  // namespace

StorageReport storage_report(std::uint64_t n, std::uint64_t k, std::uint64_t theta,
                             std::uint64_t ring_size) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (theta == 0) throw DomainError("theta must be positive");
  StorageReport r;
  r.n = n;
  r.k = k;
  r.theta = theta;
  r.ring_size = ring_size;
  r.baseline_f = mul(mul(n, k), theta);
  r.pdp_f = mul(mul(2, n), theta);
  r.hcl_cost = mul(ring_size, theta);
  r.checker_cost = mul(n, theta);
  r.savings = mul(mul(n, theta), k - 2);
  return r;
}

std::string format_storage_report(const StorageReport& r) {
  std::ostringstream out;
  out << "storage cost (n=" << r.n << ", k=" << r.k << ", theta=" << r.theta << ")\n";
  out << "  baseline_F " << r.baseline_f << "\n";
  out << "  pdp_F " << r.pdp_f << "\n";
  out << "  hcl_cost " << r.hcl_cost << " (independent of n)\n";
  out << "  checker_cost " << r.checker_cost << "\n";
  out << "  savings " << r.savings << "\n";
  for (auto [name, v] : {std::pair{"baseline_F", r.baseline_f}, {"pdp_F", r.pdp_f},
                         {"hcl_cost", r.hcl_cost}, {"checker_cost", r.checker_cost},
                         {"savings", r.savings}}) {
    out << "metric=" << name << " value=" << v << " ci=0\n";
  }
  return out.str();
}

}  // namespace pdp

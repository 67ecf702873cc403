#include "screloc/rng.hpp"

namespace screloc {

std::vector<std::uint32_t> Rng::sample_without_replacement(std::uint32_t n, std::uint32_t k) {
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    pool[i] = i;
  }
  const std::uint32_t take = std::min(n, k);
  for (std::uint32_t i = 0; i < take; ++i) {
    const std::uint32_t j = i + uniform_below(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  return pool;
}

}  // namespace screloc

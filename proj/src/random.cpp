#include "relpoly/random.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace relpoly {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n)
{
  if (n == 0)
    throw std::invalid_argument("uniform_below: empty range");
  using u128 = unsigned __int128;
  u128 m = static_cast<u128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

SubsetSampler::SubsetSampler(std::size_t n)
  : perm_(n)
{
  std::iota(perm_.begin(), perm_.end(), std::size_t{ 0 });
}

std::span<const std::size_t> SubsetSampler::draw(Rng& rng, std::size_t k)
{
  const std::size_t n = perm_.size();
  if (k > n)
    throw std::invalid_argument("SubsetSampler: k exceeds population");
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + uniform_below(rng, n - i);
    std::swap(perm_[i], perm_[j]);
  }
  return { perm_.data(), k };
}

} // namespace relpoly

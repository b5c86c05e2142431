#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace relpoly {

// std::mt19937_64 output is fixed by the standard, unlike the std
// distributions, so integer draws go through uniform_below below.
using Rng = std::mt19937_64;

//! SplitMix64 finaliser; maps (seed, stream) to an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

//! Unbiased integer in [0, n), Lemire's multiply-and-reject method.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

/// Draws uniform k-subsets of {0, ..., n-1} by partial Fisher-Yates.
///
/// The backing permutation is not reset between draws; it stays a
/// permutation, which is all the shuffle needs.
class SubsetSampler
{
public:
  explicit SubsetSampler(std::size_t n);

  std::span<const std::size_t> draw(Rng& rng, std::size_t k);

private:
  std::vector<std::size_t> perm_;
};

} // namespace relpoly

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "capgen/capacity.hpp"
#include "capgen/random.hpp"

namespace capgen {

using BatchJob = std::function<std::vector<Capacity>(std::size_t count, Rng& rng)>;

/// Splits `count` into `threads` contiguous chunks. Worker w draws from
/// Rng(derive_seed(seed, w)); chunks are concatenated in worker order, so the
/// output depends only on (seed, threads).
std::vector<Capacity> generate_batch(std::size_t count, unsigned threads, std::uint64_t seed, const BatchJob& job);

}  // namespace capgen

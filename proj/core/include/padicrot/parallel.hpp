#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace padicrot {

// splitmix64 finalizer; derives independent per-chunk streams from one seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t stream);

unsigned default_threads();

// Runs body(i) for i in [0, count) on up to `threads` workers. Work is handed
// out by index, so any reduction the caller performs per index and combines
// in index order is independent of the thread count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace padicrot

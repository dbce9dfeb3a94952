#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ripkit/linalg.hpp"

namespace ripkit {

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::int64_t n, std::int64_t k);

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

// The combination of size k from {0..n-1} with lexicographic rank `rank`.
std::vector<Index> unrank_combination(std::uint64_t rank, Index n, Index k);

// Advances `c` to the next combination of {0..n-1} in lexicographic order.
// Returns false after the last one.
bool next_combination(std::vector<Index>& c, Index n);

// Calls fn(combination) for every k-subset of {0..n-1}, lexicographically.
void for_each_combination(Index n, Index k,
                          const std::function<void(const std::vector<Index>&)>& fn);

// Splits [0, count) into `parts` contiguous ranges and runs fn(begin, end) for
// each, on up to `threads` worker threads (0 = hardware concurrency).
void parallel_ranges(std::uint64_t count, unsigned threads,
                     const std::function<void(std::uint64_t, std::uint64_t)>& fn);

unsigned resolve_thread_count(unsigned requested);

}  // namespace ripkit

#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rsg {

// Runs fn(begin, end) over [0, total) split into contiguous chunks.
// The chunk layout depends only on `total`, never on `workers`, so any
// per-chunk results combined in chunk order are identical for every worker
// count.  workers <= 1 runs inline.
void parallel_for(std::size_t total, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// Fixed chunk width used for deterministic floating-point reductions.
inline constexpr std::size_t kSumChunk = 8192;

// Deterministic sum of term(i) for i in [0, total): chunk partial sums are
// accumulated left-to-right regardless of how many threads computed them.
double deterministic_sum(std::size_t total, int workers,
                         const std::function<double(std::size_t)>& term);

int resolve_workers(int requested);

}  // namespace rsg

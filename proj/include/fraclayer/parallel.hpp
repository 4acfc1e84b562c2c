#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace fraclayer {

void set_thread_count(int n);
int thread_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
// visited by exactly one call, so per-index outputs do not depend on the
// number of threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Pairwise summation over fixed blocks; the association order depends only on
// the length of the input.
double pairwise_sum(std::span<const double> v);

}  // namespace fraclayer

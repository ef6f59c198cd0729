#pragma once

#include <cstddef>
#include <functional>

// Minimal chunked thread-pool-free parallel loop. Work is split into
// contiguous index ranges, one std::thread each; results must be written to
// disjoint per-index slots so evaluation order never matters. The MBCS_THREADS
// environment variable caps the thread count.

namespace mbci {

/// Worker count: min(MBCS_THREADS if set, hardware_concurrency), at least 1.
int max_threads();

/// Invokes chunk(begin, end) over a partition of [0, n), possibly from
/// multiple threads. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk);

}  // namespace mbci

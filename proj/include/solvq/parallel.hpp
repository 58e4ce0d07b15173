#pragma once

#include <cstddef>
#include <functional>

namespace solvq {

/// Worker cap: min(hardware_concurrency, SOLVQ_THREADS if set). At least 1.
std::size_t worker_count();

/// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries do
/// not depend on the worker count, so results filled by index are identical
/// for any SOLVQ_THREADS setting.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace solvq

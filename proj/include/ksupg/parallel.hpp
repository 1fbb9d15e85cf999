#pragma once

#include <cstddef>
#include <functional>

namespace ksupg {

/// Worker count: KSUPG_THREADS when set to a positive integer, else hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is visited exactly once,
/// so per-index results do not depend on the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 4096);

}  // namespace ksupg

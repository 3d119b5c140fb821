#pragma once

#include <cstddef>
#include <functional>

namespace fbms {

/// Worker count used by data-parallel loops (default 1).
int num_threads();
void set_num_threads(int n);

/// Runs `body(begin, end)` over a static partition of [0, n). Chunk
/// boundaries depend only on `n` and the thread count, and callers only use
/// it for element-wise work, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fbms

#pragma once

#include <cstddef>
#include <functional>

namespace porolab {

// Number of worker threads: POROSITY_LAB_THREADS caps it, 0 or unset = auto
// (hardware concurrency).
unsigned thread_budget();

// Runs fn(begin, end) over disjoint chunks of [0, n), possibly on several
// threads. Callers get determinism by writing to preallocated slots and
// reducing in index order afterwards.
void parallel_chunks(std::size_t n, std::size_t grain,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace porolab

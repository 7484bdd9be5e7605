#pragma once

#include <cstddef>
#include <functional>

namespace spherelab {

// Process cap for all data-parallel loops (CLI --threads). 0 = hardware default.
void set_thread_cap(int threads);
int thread_cap();

// Static block partition of [0, n). Each worker owns a contiguous index range,
// so writes into per-index slots are race-free and results do not depend on
// the number of threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace spherelab

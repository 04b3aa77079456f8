// parallel.hpp: minimal fork/join loop over an index range

#pragma once

#include <cstddef>
#include <functional>

namespace cqom {

// Worker count: CQOM_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; results
// must be written to disjoint locations. Nested calls run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace cqom

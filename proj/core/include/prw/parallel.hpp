#pragma once

#include <cstddef>
#include <functional>

namespace prw {

// Worker count: explicit request wins, then the PRW_THREADS environment
// variable, then hardware concurrency.
int effective_threads(int requested = 0);

// Runs fn(0..count-1) on a transient worker pool. Tasks must be independent;
// each writes only its own output slot, so results do not depend on the
// thread count or the scheduling order.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace prw

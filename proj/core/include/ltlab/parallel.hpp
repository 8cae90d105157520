#pragma once

#include <cstddef>
#include <functional>

namespace ltlab {

/// Worker count: LTLAB_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_budget();

/// Runs body(i) for i in [0, count) on up to thread_budget() threads.
/// Results must not depend on scheduling; exceptions are rethrown
/// (the one from the lowest failing index wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ltlab

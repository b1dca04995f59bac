#pragma once

#include <functional>

namespace hypercosh {

/// Worker cap for candidate-scoring loops. 1 disables threading.
int max_threads();
void set_max_threads(int k);

/// Runs fn(i) for i in [0, count). Each index writes only its own output
/// slot, so the result is identical for every thread count; reductions are
/// done by the caller in index order.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace hypercosh

#pragma once

#include <functional>

namespace rigidlab {

// Worker count: RIGIDLAB_THREADS if set, else hardware concurrency. An
// explicit set_thread_count overrides both (0 restores the default).
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [0, n) on a work-stealing pool. Bodies must write
// only to their own slot so results are independent of scheduling; any
// exception is rethrown on the caller thread.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace rigidlab

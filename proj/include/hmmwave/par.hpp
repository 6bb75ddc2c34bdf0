#pragma once

namespace hmmwave::exec {

// Global execution mode. The OpenMP kernels are the default when compiled
// in; the serial reference path is selected with set_parallel(false) or by
// running with a single thread. Mode changes are not expected while
// compute kernels are in flight.
void set_parallel(bool on);
bool parallel_enabled();

// True when a kernel invoked right now should take the OpenMP path:
// parallelism is enabled and we are not already inside a parallel region
// (inner loops of a parallel sweep run serially).
bool use_omp();

void set_threads(int n);  // n <= 0 restores the library default
int max_threads();

}  // namespace hmmwave::exec

#pragma once

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tracemc {

// Run fn(0..n-1), fanning out over `workers` threads when OpenMP is
// available and workers > 1. The first exception thrown by any task is
// rethrown after the loop drains. workers <= 1 runs inline, serially, in
// index order — that is the reference execution the parallel path must match.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
#ifdef _OPENMP
  if (workers > 1 && n > 1) {
    std::exception_ptr error;
#pragma omp parallel for num_threads(workers) schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
#pragma omp critical(tracemc_parallel_for_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return;
  }
#else
  (void)workers;
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

// Number of hardware worker slots OpenMP would use at this nesting level.
int max_hardware_workers();

}  // namespace tracemc

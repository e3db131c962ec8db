#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mil {

// Execution policy for sample-level loops (batch gradients, dataset
// generation, verification trials). One likelihood evaluation is always
// single-threaded; parallelism never goes below the sample level, and
// callers reduce per-sample results in index order so both policies give
// bit-identical answers.
enum class Exec { serial, parallel };

inline const char* exec_name(Exec e) { return e == Exec::parallel ? "parallel" : "serial"; }

// fn(i) for i in [0, n), each i exactly once. Workers must only write
// state owned by index i. The first exception (by scheduling, not index) is
// rethrown after the loop drains.
template <typename Fn>
void parallel_for(Exec exec, std::size_t n, Fn&& fn) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
    std::exception_ptr error;
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace mil

#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace minsurf {

// Execution policy for the grid-sized kernels.  Every kernel offered in both
// flavours writes each output slot from exactly one index and reduces
// serially afterwards, so serial and parallel runs are bitwise identical.
enum class Exec { serial, parallel };

template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) f(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace minsurf

//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_PARALLEL_H_
#define ESIAUG_PARALLEL_H_

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace esiaug {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs fn(i) for i in [0, n) across OpenMP threads. The first exception
/// thrown by any iteration is rethrown on the calling thread after the loop.
/// Callers write results into pre-sized, index-addressed storage so the
/// outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::ptrdiff_t n, Fn &&fn) {
  std::exception_ptr error;
  std::mutex error_mutex;

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error)
        error = std::current_exception();
    }
  }

  if (error)
    std::rethrow_exception(error);
}

}  // namespace esiaug

#endif  // ESIAUG_PARALLEL_H_

#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace convexlse {

// Replication loops run either serially (reference path) or via OpenMP.
// Both orderings must produce identical results: work items only write to
// their own index and draw randomness from per-index derived generators.
enum class ExecMode { Serial, OpenMP };

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline const char* to_string(ExecMode mode) {
  return mode == ExecMode::Serial ? "serial" : "openmp";
}

inline ExecMode exec_mode_from_string(const std::string& s) {
  if (s == "serial") return ExecMode::Serial;
  if (s == "openmp") return ExecMode::OpenMP;
  throw std::invalid_argument("unknown execution mode: " + s);
}

template <typename Fn>
void parallel_for_index(std::size_t count, ExecMode mode, Fn&& fn) {
#if defined(_OPENMP)
  if (mode == ExecMode::OpenMP) {
    std::exception_ptr failure = nullptr;
    // Chunked so neighbouring work items (whose results often sit in
    // adjacent memory) stay on one thread.
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(convexlse_parallel_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    return;
  }
#endif
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

}  // namespace convexlse

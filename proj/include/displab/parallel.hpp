#pragma once

// Trial-level parallelism. Each trial writes its own slot of the output and
// all reductions happen afterwards in index order, so results are identical
// for every thread count and for the serial reference backend.

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace displab::parallel {

enum class Backend { Serial, OpenMP };

struct ExecPolicy {
  Backend backend = Backend::OpenMP;
  int threads = 0;  // 0: OpenMP default

  static ExecPolicy serial() { return {Backend::Serial, 1}; }
  static ExecPolicy openmp(int threads = 0) { return {Backend::OpenMP, threads}; }
};

inline bool openmp_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

// out[i] = fn(i) for i in [0, count).
template <class T, class Fn>
std::vector<T> map_indices(std::size_t count, Fn&& fn, const ExecPolicy& policy = {}) {
  std::vector<T> out(count);
  if (policy.backend == Backend::Serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
#ifdef _OPENMP
  std::exception_ptr first_error;
  std::size_t first_index = count;
  const int threads = policy.threads > 0 ? policy.threads : omp_get_max_threads();
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(displab_map_error)
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first_error = std::current_exception();
      }
    }
  }
  // Rethrow the lowest-index failure so error reporting is schedule independent.
  if (first_error) std::rethrow_exception(first_error);
#else
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
#endif
  return out;
}

}  // namespace displab::parallel

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dasopt {

enum class ExecMode { Serial, OpenMp };

/// Runs body(i) for i in [0, n). In OpenMp mode iterations are distributed
/// across threads (threads <= 0 uses the runtime default); results must be
/// written to disjoint slots so that both modes produce identical output.
/// The Serial mode is the reference path the parallel one is tested against.
template <typename F>
void parallel_for(std::size_t n, ExecMode mode, int threads, F&& body) {
#ifdef _OPENMP
  if (mode == ExecMode::OpenMp && n > 1) {
    std::exception_ptr error;
    std::mutex error_mutex;
    const int num_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(num_threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return;
  }
#else
  (void)threads;
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace dasopt

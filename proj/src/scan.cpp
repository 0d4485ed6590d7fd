#include "etl/scan.hpp"

#include <cstdlib>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace etl::scan {

int thread_limit() {
#ifdef _OPENMP
  int hw = omp_get_max_threads();
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("ETL_THREADS")) {
    const long requested = std::strtol(env, nullptr, 10);
    if (requested >= 1 && requested < hw) return static_cast<int>(requested);
    if (requested >= hw) return hw;
  }
  return hw;
#else
  return 1;
#endif
}

namespace detail {

void run_indexed(std::size_t count, Exec exec, const std::function<void(std::size_t)>& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel && count > 1) {
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int threads = thread_limit();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace detail
}  // namespace etl::scan

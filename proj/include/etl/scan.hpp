#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace etl::scan {

/// Execution policy for grid scans. Every kernel in this project computes
/// grid points independently and writes to preassigned slots, so the two
/// policies produce bitwise-identical results; the serial path is kept as
/// the reference implementation for tests and benchmarking.
enum class Exec { serial, parallel };

/// Number of threads parallel scans may use. Reads ETL_THREADS on every call
/// (clamped to [1, hardware]); without OpenMP this is always 1.
int thread_limit();

namespace detail {
void run_indexed(std::size_t count, Exec exec, const std::function<void(std::size_t)>& body);
}

/// Apply f(i) for i in [0, count). Under Exec::parallel the iterations run in
/// an OpenMP parallel-for; exceptions thrown by f are captured and rethrown
/// on the calling thread (first one wins).
template <typename F>
void for_each(std::size_t count, Exec exec, F&& f) {
  detail::run_indexed(count, exec, std::function<void(std::size_t)>(std::forward<F>(f)));
}

}  // namespace etl::scan

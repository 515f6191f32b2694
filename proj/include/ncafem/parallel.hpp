#pragma once

#include <exception>
#include <mutex>

namespace ncafem {

/// Execution policy for element and edge loops.
enum class Exec { serial, parallel };

/// Runs body(i) for i in [0, n).  Bodies must write to disjoint slots; the
/// first exception thrown by any iteration is rethrown after the loop.
template <class Body>
void for_each_index(Exec exec, int n, Body &&body) {
  if (exec == Exec::serial) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex m;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(m);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

} // namespace ncafem

#include "inar/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace inar {

namespace {
std::atomic<int> g_max_threads{0};
std::atomic<bool> g_serial{false};
}  // namespace

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }
int max_threads() { return g_max_threads.load(); }

void set_serial(bool serial) { g_serial.store(serial); }
bool serial_mode() { return g_serial.load(); }

int resolved_threads() {
  if (g_serial.load()) return 1;
  int n = g_max_threads.load();
#ifdef _OPENMP
  if (n <= 0) n = omp_get_max_threads();
#else
  n = 1;
#endif
  return n < 1 ? 1 : n;
}

namespace detail {

void parallel_for_impl(std::ptrdiff_t n, void* ctx, void (*fn)(void*, std::ptrdiff_t)) {
#ifdef _OPENMP
  const int threads = resolved_threads();
  if (threads > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(ctx, i);
    return;
  }
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) fn(ctx, i);
}

}  // namespace detail

}  // namespace inar

#pragma once

#include <cstddef>

namespace inar {

// Runtime controls for the OpenMP kernels. Every parallel loop in the
// library writes to disjoint, preallocated slots and performs reductions
// serially in index order, so the parallel schedule is bitwise identical
// to the serial one for any thread count. Tests pin `set_serial(true)` to
// compare both paths; the bench target times them against each other.

void set_max_threads(int n);  // 0 = OpenMP default
int max_threads();

void set_serial(bool serial);
bool serial_mode();

int resolved_threads();

namespace detail {
void parallel_for_impl(std::ptrdiff_t n, void* ctx, void (*fn)(void*, std::ptrdiff_t));
}

template <typename Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
  detail::parallel_for_impl(n, const_cast<void*>(static_cast<const void*>(&fn)),
                            [](void* ctx, std::ptrdiff_t i) { (*static_cast<Fn*>(ctx))(i); });
}

// Reference schedule. Kept separate so benchmarks and equivalence tests do
// not depend on the global serial flag.
template <typename Fn>
void serial_for(std::ptrdiff_t n, Fn&& fn) {
  for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

}  // namespace inar

#pragma once

#include <exception>

namespace singconv {

// Worker-count policy: an explicit set_worker_threads() call wins, then the
// SINGCONV_THREADS environment variable, then the OpenMP default. A value of
// 0 means "auto".
void set_worker_threads(int n);
int worker_threads();

namespace detail {
void run_parallel(long n, void* ctx, void (*body)(void*, long));
}

// Runs body(i) for i in [0, n). Iterations must be independent and write only
// to their own output slots; every reduction over the results happens after
// the loop in a fixed order, so the outcome is identical for any thread
// count. Exceptions thrown by iterations are captured and rethrown once.
template <class F>
void parallel_for(long n, F&& body) {
    detail::run_parallel(n, &body, [](void* ctx, long i) {
        (*static_cast<F*>(ctx))(i);
    });
}

} // namespace singconv

#include "singconv/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace singconv {

namespace {

std::atomic<int> g_override{-1}; // -1 = unset, 0 = auto, >0 = fixed

int env_threads() {
    static const int cached = [] {
        const char* v = std::getenv("SINGCONV_THREADS");
        if (v == nullptr || *v == '\0') return -1;
        char* end = nullptr;
        long n = std::strtol(v, &end, 10);
        if (end == v || n < 0) return -1;
        return static_cast<int>(n);
    }();
    return cached;
}

int hardware_default() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace

void set_worker_threads(int n) { g_override.store(n < 0 ? -1 : n); }

int worker_threads() {
    int n = g_override.load();
    if (n < 0) n = env_threads();
    if (n < 0 || n == 0) n = hardware_default();
    return n > 0 ? n : 1;
}

namespace detail {

void run_parallel(long n, void* ctx, void (*body)(void*, long)) {
    const int threads = worker_threads();
    bool nested = false;
#ifdef _OPENMP
    nested = omp_in_parallel();
#endif
    if (threads <= 1 || n < 2 || nested) {
        for (long i = 0; i < n; ++i) body(ctx, i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(dynamic)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            body(ctx, i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace detail

} // namespace singconv

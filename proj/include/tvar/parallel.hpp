#pragma once

#include <cstddef>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tvar::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs body(i) for i = 0..count-1. threads <= 1 is the serial reference
// path; threads > 1 uses an OpenMP static schedule. Each index owns its own
// output slot, so serial and parallel runs produce identical results. The
// lowest-index exception, if any, is rethrown after the loop.
template <typename F>
void for_each_index(std::size_t count, int threads, F&& body) {
#ifdef _OPENMP
    if (threads > 1 && count > 1) {
        std::exception_ptr first_error = nullptr;
        std::size_t first_error_index = count;
#pragma omp parallel for schedule(static) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(tvar_par_error)
                {
                    if (static_cast<std::size_t>(i) < first_error_index) {
                        first_error_index = static_cast<std::size_t>(i);
                        first_error = std::current_exception();
                    }
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#else
    (void)threads;
#endif
    for (std::size_t i = 0; i < count; ++i) {
        body(i);
    }
}

}  // namespace tvar::par

#include "ssg/parallel.hpp"

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ssg::par {

int hardware_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void for_each_index(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
#ifdef _OPENMP
    if (jobs > 1) {
        std::exception_ptr err;
        std::mutex err_mutex;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#else
    (void)jobs;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace ssg::par

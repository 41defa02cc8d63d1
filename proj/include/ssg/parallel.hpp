#pragma once

#include <cstddef>
#include <functional>

namespace ssg::par {

// Number of worker threads OpenMP would use; 1 when built without OpenMP.
int hardware_jobs();

// Runs fn(i) for i in [0, n). jobs <= 1 executes serially on the calling
// thread (the reference path); jobs > 1 uses OpenMP when compiled in.
// Each index must write only to its own output slot, so the result is
// identical for every thread count.
void for_each_index(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace ssg::par

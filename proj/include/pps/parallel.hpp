#pragma once

#include <Eigen/Core>

#include <functional>

namespace pps {

// Worker count: PPS_THREADS when set (>= 1), else hardware concurrency.
int thread_count();

// Runs fn(i) for i in [begin, end) over contiguous chunks. Each index is
// processed by exactly one worker, so per-index results do not depend on the
// thread count.
void parallel_for(Eigen::Index begin, Eigen::Index end, const std::function<void(Eigen::Index)>& fn,
                  Eigen::Index min_chunk = 1);

}  // namespace pps

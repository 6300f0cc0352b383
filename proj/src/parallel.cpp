#include "pps/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace pps {

int thread_count() {
  if (const char* env = std::getenv("PPS_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(Eigen::Index begin, Eigen::Index end, const std::function<void(Eigen::Index)>& fn,
                  Eigen::Index min_chunk) {
  const Eigen::Index n = end - begin;
  if (n <= 0) return;
  const Eigen::Index workers =
      std::min<Eigen::Index>(thread_count(), std::max<Eigen::Index>(1, n / std::max<Eigen::Index>(1, min_chunk)));
  if (workers <= 1) {
    for (Eigen::Index i = begin; i < end; ++i) fn(i);
    return;
  }
  const Eigen::Index chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Eigen::Index w = 0; w < workers; ++w) {
    const Eigen::Index lo = begin + w * chunk;
    const Eigen::Index hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (Eigen::Index i = lo; i < hi; ++i) fn(i);
    });
  }
}

}  // namespace pps

#pragma once

#include <cstddef>
#include <functional>

namespace fracmt {

// Worker count: hardware concurrency, capped by the FRACMT_THREADS env var.
std::size_t worker_count();

// Runs body(i) for i in [0, n) across worker_count() threads. Each index is
// processed exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracmt

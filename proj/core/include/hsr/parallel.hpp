#pragma once

#include <functional>

namespace hsr {

// Process-wide cap on worker threads. 0 selects hardware concurrency.
// Results never depend on this value: parallel work only writes disjoint
// outputs and every reduction runs afterwards in fixed row-major order.
void set_thread_count(unsigned n);
unsigned thread_count();

// Splits [0, rows) into contiguous chunks and runs fn(begin, end) for each.
void parallel_for_rows(int rows, const std::function<void(int, int)>& fn);

}  // namespace hsr

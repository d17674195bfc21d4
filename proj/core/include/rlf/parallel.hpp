#pragma once

#include <cstddef>
#include <functional>

namespace rlf {

/// Number of worker threads to use; 0 selects std::thread::hardware_concurrency().
struct Parallelism {
    unsigned threads = 1;

    [[nodiscard]] unsigned resolved() const;
};

/// Runs body(i) for i in [0, count). Each index runs exactly once; work is
/// split into contiguous chunks so results written to slot i do not depend on
/// the thread count. An exception from the lowest failing index is rethrown,
/// matching what a serial run would report.
void parallel_for(std::size_t count, const Parallelism& parallelism, const std::function<void(std::size_t)>& body);

}  // namespace rlf

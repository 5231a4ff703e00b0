#pragma once

#include <cstddef>
#include <functional>

namespace barron {

/// Worker count used by grid/Monte Carlo loops. Defaults to the hardware
/// concurrency; results never depend on it.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs `body(i)` for i in [0, n). Work is distributed over `thread_count()`
/// threads; callers write results into slot i, so any reduction done
/// afterwards in index order is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace barron

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spinpoint {

enum class Spacing { Linear, Log };

// `points` samples from k_min to k_max inclusive.  Requires 0 < k_min < k_max
// and points >= 2.
std::vector<double> make_grid(double k_min, double k_max, std::size_t points, Spacing spacing);

// 1000 log-spaced momenta in [0.01, 20].
std::vector<double> default_k_grid();

// Throws DomainError unless every entry is finite, positive and strictly increasing.
void require_positive_sorted(std::span<const double> grid);

// Calls body(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency).  Exceptions from body are rethrown on the calling thread.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace spinpoint

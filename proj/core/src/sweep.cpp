#include "spinpoint/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "spinpoint/errors.hpp"

namespace spinpoint {

std::vector<double> make_grid(double k_min, double k_max, std::size_t points, Spacing spacing) {
    if (!(k_min > 0.0) || !(k_max > k_min) || !std::isfinite(k_max)) {
        throw DomainError("k grid needs 0 < k_min < k_max");
    }
    if (points < 2) {
        throw DomainError("k grid needs at least 2 points");
    }
    std::vector<double> grid(points);
    const double last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / last;
        grid[i] = spacing == Spacing::Linear
                      ? k_min + (k_max - k_min) * t
                      : std::exp(std::log(k_min) + (std::log(k_max) - std::log(k_min)) * t);
    }
    grid.front() = k_min;
    grid.back() = k_max;
    return grid;
}

std::vector<double> default_k_grid() { return make_grid(0.01, 20.0, 1000, Spacing::Log); }

void require_positive_sorted(std::span<const double> grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw DomainError("k grid entry " + std::to_string(i) + " is not a positive finite number");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw DomainError("k grid is not strictly increasing at entry " + std::to_string(i));
        }
    }
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace spinpoint

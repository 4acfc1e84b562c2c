#include "fraclayer/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace fraclayer {

namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kBlock = 64;

double pairwise(const double* p, std::size_t n) {
    if (n <= kBlock) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::size_t left = (blocks / 2) * kBlock;
    return pairwise(p, left) + pairwise(p + left, n - left);
}
}  // namespace

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (t <= 1 || n < 16) {
        if (n > 0) body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(t);
    pool.reserve(t - 1);
    for (std::size_t k = 1; k < t; ++k) {
        pool.emplace_back([&, k] {
            try {
                body(k * n / t, (k + 1) * n / t);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    try {
        body(0, n / t);
    } catch (...) {
        errors[0] = std::current_exception();
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double pairwise_sum(std::span<const double> v) { return pairwise(v.data(), v.size()); }

}  // namespace fraclayer

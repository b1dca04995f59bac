#include "hypercosh/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace hypercosh {

namespace {
std::atomic<int> g_max_threads{1};
}

int max_threads() { return g_max_threads.load(); }

void set_max_threads(int k) { g_max_threads.store(std::max(1, k)); }

void parallel_for(int count, const std::function<void(int)>& fn) {
    const int workers = std::min(max_threads(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    struct Failure {
        int index;
        std::exception_ptr error;
    };
    std::vector<Failure> failures(workers, {-1, nullptr});
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            // Block partition: worker w owns [lo, hi).
            const int base = count / workers, extra = count % workers;
            const int lo = w * base + std::min(w, extra);
            const int hi = lo + base + (w < extra ? 1 : 0);
            for (int i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    failures[w] = {i, std::current_exception()};
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    // Rethrow the failure with the smallest index so errors are deterministic.
    const Failure* first = nullptr;
    for (const auto& f : failures)
        if (f.error && (!first || f.index < first->index)) first = &f;
    if (first) std::rethrow_exception(first->error);
}

}  // namespace hypercosh

#include "lakedis/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lakedis {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LAKEDIS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(size_t count, int workers, const std::function<void(size_t)>& fn) {
    workers = resolve_workers(workers);
    if (count == 0) return;
    if (workers == 1 || count == 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const size_t grain = std::max<size_t>(1, count / (static_cast<size_t>(workers) * 16));
    std::atomic<size_t> cursor{0};
    std::exception_ptr error;
    std::mutex error_mu;

    auto body = [&] {
        for (;;) {
            size_t begin = cursor.fetch_add(grain);
            if (begin >= count) return;
            size_t end = std::min(count, begin + grain);
            try {
                for (size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void ordered_chunk_reduce(size_t chunk_count, int workers, size_t vector_size,
                          const std::function<void(size_t, std::vector<double>&)>& compute,
                          std::vector<double>& accum) {
    workers = resolve_workers(workers);
    accum.assign(vector_size, 0.0);
    if (chunk_count == 0) return;

    if (workers == 1) {
        std::vector<double> local;
        for (size_t c = 0; c < chunk_count; ++c) {
            local.assign(vector_size, 0.0);
            compute(c, local);
            for (size_t i = 0; i < vector_size; ++i) accum[i] += local[i];
        }
        return;
    }

    std::atomic<size_t> cursor{0};
    std::mutex mu;
    std::condition_variable cv;
    std::map<size_t, std::vector<double>> ready;
    size_t next_merge = 0;
    std::exception_ptr error;

    auto body = [&] {
        for (;;) {
            size_t c = cursor.fetch_add(1);
            if (c >= chunk_count) return;
            std::vector<double> local(vector_size, 0.0);
            try {
                compute(c, local);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
                next_merge = chunk_count;  // unblock waiters
                cv.notify_all();
                return;
            }
            std::unique_lock lock(mu);
            // Keep the out-of-order window bounded so memory stays O(workers).
            cv.wait(lock, [&] { return c <= next_merge + 2 * static_cast<size_t>(workers) ||
                                       next_merge >= chunk_count; });
            if (error) return;
            ready.emplace(c, std::move(local));
            while (!ready.empty() && ready.begin()->first == next_merge) {
                const auto& v = ready.begin()->second;
                for (size_t i = 0; i < vector_size; ++i) accum[i] += v[i];
                ready.erase(ready.begin());
                ++next_merge;
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    if (next_merge != chunk_count && !error)
        throw std::logic_error("ordered_chunk_reduce: incomplete merge");
}

}  // namespace lakedis

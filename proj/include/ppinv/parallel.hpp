#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ppinv {

// Runs fn(i) for i in [0, count) on a pool of `jobs` workers. Work items are
// independent and write only to their own result slots, so output order is
// the caller's index order no matter how the pool schedules.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    unsigned spawn = jobs < count ? jobs : static_cast<unsigned>(count);
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace ppinv

#ifndef RISNET_PARALLEL_HPP
#define RISNET_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace risnet {

/// Fixed trial-block size. Block boundaries never depend on the worker count.
inline constexpr std::uint64_t kTrialBlock = 4096;

/// Resolves a requested worker count; 0 means one per hardware thread.
inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Evaluates block_fn(begin, end) over fixed-size trial blocks on a pool of
/// workers and returns the per-block results in block order.
template <class Result, class BlockFn>
std::vector<Result> map_trial_blocks(std::uint64_t trials, unsigned workers, BlockFn&& block_fn) {
    const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Result> results(blocks);
    const unsigned pool =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(blocks, 1)));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::uint64_t b = next++; b < blocks; b = next++) {
                const std::uint64_t begin = b * kTrialBlock;
                const std::uint64_t end = std::min(trials, begin + kTrialBlock);
                results[b] = block_fn(begin, end);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (pool <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (unsigned i = 0; i < pool; ++i) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace risnet

#endif  // RISNET_PARALLEL_HPP

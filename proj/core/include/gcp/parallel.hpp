#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gcp {

/// Persistent fork-join pool. parallel_for splits [0, count) into one
/// contiguous chunk per worker (the calling thread takes chunk 0); chunk
/// boundaries depend only on count and the worker count, and bodies must
/// write disjoint outputs, so results never depend on scheduling.
class WorkerPool {
public:
    using Body = std::function<void(std::size_t begin, std::size_t end)>;

    explicit WorkerPool(int threads = 1);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int size() const noexcept { return static_cast<int>(chunks_); }

    void parallel_for(std::size_t count, const Body& body);

private:
    void worker_loop(std::size_t index);
    static std::size_t chunk_begin(std::size_t count, std::size_t chunk, std::size_t chunks) noexcept;

    std::size_t chunks_ = 1;
    std::vector<std::jthread> workers_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const Body* body_ = nullptr;
    std::size_t count_ = 0;
    std::uint64_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

/// Thread count for a request: values <= 0 mean hardware concurrency; others are capped at 256.
int resolve_threads(int requested);

}  // namespace gcp

#include "gcp/parallel.hpp"

#include <algorithm>

namespace gcp {

WorkerPool::WorkerPool(int threads) {
    const int extra = std::max(threads, 1) - 1;
    chunks_ = static_cast<std::size_t>(extra) + 1;
    workers_.reserve(static_cast<std::size_t>(extra));
    for (int i = 0; i < extra; ++i) {
        workers_.emplace_back([this, i] { worker_loop(static_cast<std::size_t>(i) + 1); });
    }
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    start_cv_.notify_all();
    workers_.clear();
}

std::size_t WorkerPool::chunk_begin(std::size_t count, std::size_t chunk, std::size_t chunks) noexcept {
    return count * chunk / chunks;
}

void WorkerPool::parallel_for(std::size_t count, const Body& body) {
    const std::size_t chunks = static_cast<std::size_t>(size());
    if (chunks == 1 || count < chunks) {
        if (count > 0) {
            body(0, count);
        }
        return;
    }
    {
        std::lock_guard lock(mutex_);
        body_ = &body;
        count_ = count;
        pending_ = workers_.size();
        error_ = nullptr;
        ++generation_;
    }
    start_cv_.notify_all();

    std::exception_ptr local_error;
    try {
        body(0, chunk_begin(count, 1, chunks));
    } catch (...) {
        local_error = std::current_exception();
    }

    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    body_ = nullptr;
    if (local_error) {
        std::rethrow_exception(local_error);
    }
    if (error_) {
        std::rethrow_exception(error_);
    }
}

void WorkerPool::worker_loop(std::size_t index) {
    std::uint64_t seen = 0;
    for (;;) {
        const Body* body = nullptr;
        std::size_t count = 0;
        {
            std::unique_lock lock(mutex_);
            start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) {
                return;
            }
            seen = generation_;
            body = body_;
            count = count_;
        }
        const std::size_t chunks = chunks_;
        std::exception_ptr error;
        try {
            (*body)(chunk_begin(count, index, chunks), chunk_begin(count, index + 1, chunks));
        } catch (...) {
            error = std::current_exception();
        }
        {
            std::lock_guard lock(mutex_);
            if (error && !error_) {
                error_ = error;
            }
            if (--pending_ == 0) {
                done_cv_.notify_one();
            }
        }
    }
}

int resolve_threads(int requested) {
    if (requested <= 0) {
        return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    }
    return std::min(requested, 256);
}

}  // namespace gcp

#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace snnmoo {

inline unsigned hardware_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Fixed set of worker threads that run `task(k)` for k in [0, n) and block
/// until all are done. Which thread runs which k is unspecified, so callers
/// must make each task's output depend only on k.
class WorkerPool {
public:
    explicit WorkerPool(unsigned threads) : threads_(std::max(1u, threads)) {
        for (unsigned t = 1; t < threads_; ++t) {
            workers_.emplace_back([this] { worker_loop(); });
        }
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    ~WorkerPool() {
        {
            std::lock_guard lock(mutex_);
            stopping_ = true;
        }
        wake_.notify_all();
        for (auto& w : workers_) {
            w.join();
        }
    }

    unsigned threads() const noexcept { return threads_; }

    void run(std::size_t n, const std::function<void(std::size_t)>& task) {
        if (threads_ == 1 || n <= 1) {
            for (std::size_t k = 0; k < n; ++k) {
                task(k);
            }
            return;
        }
        {
            std::lock_guard lock(mutex_);
            task_ = &task;
            total_ = n;
            next_ = 0;
            pending_ = n;
            error_ = nullptr;
            ++epoch_;
        }
        wake_.notify_all();
        drain();
        std::unique_lock lock(mutex_);
        done_.wait(lock, [this] { return pending_ == 0; });
        task_ = nullptr;
        if (error_) {
            std::rethrow_exception(error_);
        }
    }

private:
    void drain() {
        while (true) {
            std::size_t k;
            const std::function<void(std::size_t)>* task;
            {
                std::lock_guard lock(mutex_);
                if (task_ == nullptr || next_ >= total_) {
                    return;
                }
                k = next_++;
                task = task_;
            }
            std::exception_ptr err;
            try {
                (*task)(k);
            } catch (...) {
                err = std::current_exception();
            }
            std::lock_guard lock(mutex_);
            if (err && !error_) {
                error_ = err;
            }
            if (--pending_ == 0) {
                done_.notify_all();
            }
        }
    }

    void worker_loop() {
        std::size_t seen = 0;
        while (true) {
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] { return stopping_ || epoch_ != seen; });
                if (stopping_) {
                    return;
                }
                seen = epoch_;
            }
            drain();
        }
    }

    unsigned threads_;
    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t total_ = 0;
    std::size_t next_ = 0;
    std::size_t pending_ = 0;
    std::size_t epoch_ = 0;
    std::exception_ptr error_;
    bool stopping_ = false;
};

}  // namespace snnmoo

#include "hypertorus/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <vector>

namespace hypertorus::pool {

namespace {

// Lazily started persistent pool. Workers pull indices from a shared atomic
// counter; since every index writes disjoint outputs, scheduling order cannot
// affect results.
class Pool {
  public:
    static Pool& instance() {
        static Pool p;
        return p;
    }

    void set_threads(int n) {
        std::unique_lock lk(control_);
        stop_workers(lk);
        requested_ = n < 1 ? 1 : n;
    }

    int threads() {
        std::unique_lock lk(control_);
        return requested_;
    }

    void run(int n, const std::function<void(int)>& fn) {
        if (n <= 0) return;
        std::unique_lock lk(control_);
        const int want = std::min(requested_, n);
        if (want <= 1 || in_parallel_region) {
            lk.unlock();
            for (int i = 0; i < n; ++i) fn(i);
            return;
        }
        start_workers(want - 1);
        {
            std::lock_guard task_lk(task_mutex_);
            task_ = &fn;
            task_limit_ = n;
            next_.store(0, std::memory_order_relaxed);
            active_ = static_cast<int>(workers_.size());
            ++generation_;
        }
        task_cv_.notify_all();
        work(fn, n);  // participate
        std::unique_lock task_lk(task_mutex_);
        done_cv_.wait(task_lk, [this] { return active_ == 0; });
        task_ = nullptr;
    }

  private:
    Pool() = default;
    ~Pool() {
        std::unique_lock lk(control_);
        stop_workers(lk);
    }

    static thread_local bool in_parallel_region;

    void work(const std::function<void(int)>& fn, int n) {
        in_parallel_region = true;
        for (;;) {
            const int i = next_.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            fn(i);
        }
        in_parallel_region = false;
    }

    void start_workers(int n) {
        if (static_cast<int>(workers_.size()) == n) return;
        std::unique_lock lk(task_mutex_);
        stop_locked(lk);
        stopping_ = false;
        for (int w = 0; w < n; ++w) {
            workers_.emplace_back([this] {
                std::uint64_t seen = 0;
                for (;;) {
                    const std::function<void(int)>* task = nullptr;
                    int limit = 0;
                    {
                        std::unique_lock lk2(task_mutex_);
                        task_cv_.wait(lk2, [&] { return stopping_ || generation_ != seen; });
                        if (stopping_) return;
                        seen = generation_;
                        task = task_;
                        limit = task_limit_;
                    }
                    if (task) work(*task, limit);
                    {
                        std::lock_guard lk2(task_mutex_);
                        if (--active_ == 0) done_cv_.notify_all();
                    }
                }
            });
        }
    }

    void stop_workers(std::unique_lock<std::mutex>&) {
        std::unique_lock lk(task_mutex_);
        stop_locked(lk);
    }

    void stop_locked(std::unique_lock<std::mutex>& lk) {
        if (workers_.empty()) return;
        stopping_ = true;
        lk.unlock();
        task_cv_.notify_all();
        for (auto& t : workers_) t.join();
        lk.lock();
        workers_.clear();
        stopping_ = false;
    }

    std::mutex control_;
    int requested_ = static_cast<int>(std::thread::hardware_concurrency());

    std::mutex task_mutex_;
    std::condition_variable task_cv_, done_cv_;
    std::vector<std::thread> workers_;
    const std::function<void(int)>* task_ = nullptr;
    int task_limit_ = 0;
    int active_ = 0;
    std::uint64_t generation_ = 0;
    bool stopping_ = false;
    std::atomic<int> next_{0};
};

thread_local bool Pool::in_parallel_region = false;

}  // namespace

void set_threads(int n) { Pool::instance().set_threads(n); }
int threads() { return Pool::instance().threads(); }
void parallel_for(int n, const std::function<void(int)>& fn) { Pool::instance().run(n, fn); }

}  // namespace hypertorus::pool

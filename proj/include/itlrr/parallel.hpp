#pragma once

#include <exception>
#include <mutex>

namespace itlrr {

// Kernels take an Execution argument. Both paths compute the same values in the
// same order per output element, so results are bitwise identical.
enum class Execution { serial, parallel };

// Caps OpenMP threads used by parallel kernels; 0 restores the runtime default.
void set_thread_limit(int threads);
[[nodiscard]] int max_threads();

// Exceptions must not escape an OpenMP region; loop bodies run through capture()
// and the first failure is rethrown after the region closes.
class ExceptionSlot {
public:
    template <typename F>
    void capture(F&& body) noexcept {
        try {
            body();
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }

    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

}  // namespace itlrr

#pragma once

#include <coroutine>
#include <exception>
#include <utility>

namespace gridsched::sim {

// Coroutine type returned by an entity's body(). The engine owns the handle
// and drives resumption; a Process object is only the hand-off wrapper.
class Process {
public:
    struct promise_type {
        std::exception_ptr exception;

        Process get_return_object() {
            return Process{std::coroutine_handle<promise_type>::from_promise(*this)};
        }
        std::suspend_always initial_suspend() noexcept { return {}; }
        std::suspend_always final_suspend() noexcept { return {}; }
        void return_void() noexcept {}
        void unhandled_exception() noexcept { exception = std::current_exception(); }
    };

    using Handle = std::coroutine_handle<promise_type>;

    Process() = default;
    explicit Process(Handle h) : handle_(h) {}
    Process(Process&& other) noexcept : handle_(std::exchange(other.handle_, nullptr)) {}
    Process& operator=(Process&& other) noexcept {
        if (this != &other) {
            destroy();
            handle_ = std::exchange(other.handle_, nullptr);
        }
        return *this;
    }
    Process(const Process&) = delete;
    Process& operator=(const Process&) = delete;
    ~Process() { destroy(); }

    // Transfers ownership of the coroutine handle to the caller.
    Handle release() noexcept { return std::exchange(handle_, nullptr); }

private:
    void destroy() noexcept {
        if (handle_) {
            handle_.destroy();
            handle_ = nullptr;
        }
    }

    Handle handle_ = nullptr;
};

}  // namespace gridsched::sim

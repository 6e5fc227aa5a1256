#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "reflex/session/protocol.hpp"

namespace reflex::session {

/// Outgoing messages for one client. Replies are always kept; tick frames
/// beyond the limit push out the oldest buffered frame.
class Outbox {
public:
    explicit Outbox(std::size_t frame_limit = 64);

    void push_reply(std::string message);
    void push_frame(std::string message);
    bool try_pop(std::string& out);
    /// Waits up to `timeout`; false on timeout or once closed and drained.
    bool pop(std::string& out, std::chrono::milliseconds timeout);
    void close();
    bool closed() const;
    std::size_t dropped() const;

    /// Called after every push, outside the lock, from the pushing thread.
    void set_notify(std::function<void()> notify);

private:
    void push(std::string message, bool frame);

    mutable std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<std::pair<bool, std::string>> queue_;
    std::size_t frames_ = 0;
    std::size_t frame_limit_;
    std::size_t dropped_ = 0;
    bool closed_ = false;
    std::function<void()> notify_;
};

/// Runs one ProtocolHandler on a dedicated thread. Client messages queue up
/// and are applied between ticks; tick frames go out at the broadcast rate.
class SessionHost {
public:
    explicit SessionHost(ServiceConfig config);
    ~SessionHost();

    SessionHost(const SessionHost&) = delete;
    SessionHost& operator=(const SessionHost&) = delete;

    void start();
    void stop();

    /// Queues a client message; `reply` runs on the host thread.
    void submit(std::string message, std::function<void(std::string)> reply);
    std::future<std::string> submit(std::string message);

    std::shared_ptr<Outbox> subscribe();
    void unsubscribe(const std::shared_ptr<Outbox>& outbox);

    std::int64_t ticks() const { return ticks_.load(); }
    const ServiceConfig& config() const { return handler_.config(); }

private:
    struct Request {
        std::string message;
        std::function<void(std::string)> reply;
    };

    void loop();
    void drain_inbox();
    void broadcast(const std::string& message, bool frame);

    ProtocolHandler handler_;
    std::mutex inbox_mutex_;
    std::deque<Request> inbox_;
    std::mutex subscribers_mutex_;
    std::vector<std::shared_ptr<Outbox>> subscribers_;
    std::atomic<bool> running_{false};
    std::atomic<std::int64_t> ticks_{0};
    std::thread thread_;
};

}  // namespace reflex::session

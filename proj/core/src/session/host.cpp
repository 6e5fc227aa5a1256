#include "reflex/session/host.hpp"

#include <algorithm>
#include <cmath>

namespace reflex::session {

Outbox::Outbox(std::size_t frame_limit) : frame_limit_(std::max<std::size_t>(frame_limit, 1)) {}

void Outbox::push(std::string message, bool frame) {
    std::function<void()> notify;
    {
        std::lock_guard lock(mutex_);
        if (closed_) return;
        if (frame && frames_ >= frame_limit_) {
            auto oldest = std::find_if(queue_.begin(), queue_.end(), [](const auto& m) { return m.first; });
            queue_.erase(oldest);
            --frames_;
            ++dropped_;
        }
        queue_.emplace_back(frame, std::move(message));
        if (frame) ++frames_;
        notify = notify_;
    }
    ready_.notify_one();
    if (notify) notify();
}

void Outbox::push_reply(std::string message) { push(std::move(message), false); }
void Outbox::push_frame(std::string message) { push(std::move(message), true); }

bool Outbox::try_pop(std::string& out) {
    std::lock_guard lock(mutex_);
    if (queue_.empty()) return false;
    if (queue_.front().first) --frames_;
    out = std::move(queue_.front().second);
    queue_.pop_front();
    return true;
}

bool Outbox::pop(std::string& out, std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    if (!ready_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; })) return false;
    if (queue_.empty()) return false;
    if (queue_.front().first) --frames_;
    out = std::move(queue_.front().second);
    queue_.pop_front();
    return true;
}

void Outbox::close() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    ready_.notify_all();
}

bool Outbox::closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
}

std::size_t Outbox::dropped() const {
    std::lock_guard lock(mutex_);
    return dropped_;
}

void Outbox::set_notify(std::function<void()> notify) {
    std::lock_guard lock(mutex_);
    notify_ = std::move(notify);
}

SessionHost::SessionHost(ServiceConfig config) : handler_(std::move(config)) {
    if (!(handler_.config().speed > 0.0)) throw SessionError("speed must be positive");
    if (!(handler_.config().hz > 0.0) || !(handler_.config().broadcast_hz > 0.0)) {
        throw SessionError("tick and broadcast frequencies must be positive");
    }
}

SessionHost::~SessionHost() { stop(); }

void SessionHost::start() {
    if (running_.exchange(true)) return;
    thread_ = std::thread([this] { loop(); });
}

void SessionHost::stop() {
    if (!running_.exchange(false)) return;
    if (thread_.joinable()) thread_.join();
    std::lock_guard lock(subscribers_mutex_);
    for (auto& s : subscribers_) s->close();
}

void SessionHost::submit(std::string message, std::function<void(std::string)> reply) {
    std::lock_guard lock(inbox_mutex_);
    inbox_.push_back({std::move(message), std::move(reply)});
}

std::future<std::string> SessionHost::submit(std::string message) {
    auto promise = std::make_shared<std::promise<std::string>>();
    auto future = promise->get_future();
    submit(std::move(message), [promise](std::string reply) { promise->set_value(std::move(reply)); });
    return future;
}

std::shared_ptr<Outbox> SessionHost::subscribe() {
    auto outbox = std::make_shared<Outbox>(handler_.config().queue_limit);
    std::lock_guard lock(subscribers_mutex_);
    subscribers_.push_back(outbox);
    return outbox;
}

void SessionHost::unsubscribe(const std::shared_ptr<Outbox>& outbox) {
    std::lock_guard lock(subscribers_mutex_);
    std::erase(subscribers_, outbox);
}

void SessionHost::broadcast(const std::string& message, bool frame) {
    std::lock_guard lock(subscribers_mutex_);
    for (auto& s : subscribers_) {
        if (frame) {
            s->push_frame(message);
        } else {
            s->push_reply(message);
        }
    }
}

void SessionHost::drain_inbox() {
    std::deque<Request> pending;
    {
        std::lock_guard lock(inbox_mutex_);
        pending.swap(inbox_);
    }
    for (auto& r : pending) {
        std::string reply = handler_.handle(r.message);
        if (r.reply) r.reply(std::move(reply));
    }
}

void SessionHost::loop() {
    using clock = std::chrono::steady_clock;
    auto deadline = clock::now();
    std::int64_t last_bucket = -1;
    while (running_.load()) {
        drain_inbox();
        const double hz = handler_.session() ? handler_.session()->hz() : handler_.config().hz;
        if (handler_.ticking()) {
            auto out = handler_.tick();
            if (out.snapshot) {
                ticks_.fetch_add(1);
                const auto bucket =
                    static_cast<std::int64_t>(std::floor(out.snapshot->world.time * handler_.config().broadcast_hz + 1e-9));
                if (bucket != last_bucket || out.snapshot->mode == Mode::idle) {
                    last_bucket = bucket;
                    broadcast(tick_message(*out.snapshot), true);
                }
            }
            for (auto& e : out.events) broadcast(e, false);
        } else {
            last_bucket = -1;
        }
        deadline += std::chrono::duration_cast<clock::duration>(
            std::chrono::duration<double>(1.0 / (hz * handler_.config().speed)));
        const auto now = clock::now();
        if (deadline < now) deadline = now;
        std::this_thread::sleep_until(deadline);
    }
    drain_inbox();
}

}  // namespace reflex::session

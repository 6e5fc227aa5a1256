#include "reflex/session/server.hpp"

#include <algorithm>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>

namespace reflex::session {
namespace {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

constexpr std::size_t max_upload = 64u << 20;

http::response<http::string_body> file_response(const http::request<http::string_body>& req,
                                                const std::filesystem::path& root) {
    auto reply = [&](http::status status, std::string body, std::string_view type = "text/plain") {
        http::response<http::string_body> res{status, req.version()};
        res.set(http::field::server, "reflex");
        res.set(http::field::content_type, std::string(type));
        res.set(http::field::access_control_allow_origin, "*");
        res.keep_alive(req.keep_alive());
        res.body() = std::move(body);
        res.prepare_payload();
        return res;
    };

    const std::string target(req.target());
    if (target == "/files" || target == "/files/") {
        if (req.method() != http::verb::get) return reply(http::status::method_not_allowed, "GET only\n");
        nlohmann::json names = nlohmann::json::array();
        std::vector<std::string> sorted;
        for (const auto& e : std::filesystem::directory_iterator(root)) {
            if (e.is_regular_file() && valid_file_name(e.path().filename().string())) {
                sorted.push_back(e.path().filename().string());
            }
        }
        std::sort(sorted.begin(), sorted.end());
        for (auto& n : sorted) names.push_back(n);
        return reply(http::status::ok, names.dump() + "\n", "application/json");
    }
    if (target.rfind("/files/", 0) != 0) return reply(http::status::not_found, "not found\n");
    const std::string name = target.substr(7);
    if (!valid_file_name(name)) return reply(http::status::bad_request, "invalid file name\n");
    const auto path = root / name;

    if (req.method() == http::verb::get) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return reply(http::status::not_found, "no such file\n");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return reply(http::status::ok, buffer.str(), "application/octet-stream");
    }
    if (req.method() == http::verb::put) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) return reply(http::status::internal_server_error, "cannot write file\n");
        out << req.body();
        return reply(http::status::created, "stored " + name + "\n");
    }
    return reply(http::status::method_not_allowed, "GET or PUT only\n");
}

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket socket, SessionHost& host) : ws_(std::move(socket)), host_(host) {}

    void run(http::request<http::string_body> req) {
        outbox_ = host_.subscribe();
        std::weak_ptr<WsSession> weak = shared_from_this();
        outbox_->set_notify([weak] {
            if (auto self = weak.lock()) {
                net::post(self->ws_.get_executor(), [self] { self->flush(); });
            }
        });
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
            if (ec) return self->close();
            self->read();
        });
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->close();
            std::string text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            auto outbox = self->outbox_;
            self->host_.submit(std::move(text), [outbox](std::string reply) { outbox->push_reply(std::move(reply)); });
            self->read();
        });
    }

    void flush() {
        if (writing_ || closed_) return;
        if (!outbox_->try_pop(pending_)) return;
        writing_ = true;
        ws_.text(true);
        ws_.async_write(net::buffer(pending_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->writing_ = false;
            if (ec) return self->close();
            self->flush();
        });
    }

    void close() {
        if (closed_) return;
        closed_ = true;
        if (outbox_) {
            outbox_->set_notify({});
            outbox_->close();
            host_.unsubscribe(outbox_);
        }
    }

    websocket::stream<beast::tcp_stream> ws_;
    SessionHost& host_;
    beast::flat_buffer buffer_;
    std::shared_ptr<Outbox> outbox_;
    std::string pending_;
    bool writing_ = false;
    bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket socket, SessionHost& host) : stream_(std::move(socket)), host_(host) {}

    void run() { read(); }

private:
    void read() {
        parser_.emplace();
        parser_->body_limit(max_upload);
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, *parser_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->shutdown();
            self->handle(self->parser_->release());
        });
    }

    void handle(http::request<http::string_body> req) {
        if (websocket::is_upgrade(req)) {
            stream_.expires_never();
            std::make_shared<WsSession>(stream_.release_socket(), host_)->run(std::move(req));
            return;
        }
        auto res = std::make_shared<http::response<http::string_body>>(file_response(req, host_.config().files_dir));
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
            if (ec || res->need_eof()) return self->shutdown();
            self->read();
        });
    }

    void shutdown() {
        beast::error_code ec;
        stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
    }

    beast::tcp_stream stream_;
    SessionHost& host_;
    beast::flat_buffer buffer_;
    std::optional<http::request_parser<http::string_body>> parser_;
};

}  // namespace

struct Server::Impl {
    Impl(SessionHost& h, const std::string& address, unsigned short port)
        : host(h), acceptor(io, tcp::endpoint(net::ip::make_address(address), port)) {}

    void accept() {
        acceptor.async_accept(net::make_strand(io), [this](beast::error_code ec, tcp::socket socket) {
            if (!acceptor.is_open()) return;
            if (!ec) std::make_shared<HttpSession>(std::move(socket), host)->run();
            accept();
        });
    }

    SessionHost& host;
    net::io_context io{1};
    tcp::acceptor acceptor;
    std::thread thread;
    std::mutex mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;
};

Server::Server(SessionHost& host, std::string address, unsigned short port)
    : impl_(std::make_unique<Impl>(host, address, port)) {}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::start() {
    impl_->accept();
    impl_->thread = std::thread([this] { impl_->io.run(); });
}

void Server::stop() {
    {
        std::lock_guard lock(impl_->mutex);
        if (impl_->stopped) return;
        impl_->stopped = true;
    }
    net::post(impl_->io, [this] {
        beast::error_code ec;
        impl_->acceptor.close(ec);
    });
    impl_->io.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
    impl_->stopped_cv.notify_all();
}

void Server::wait() {
    std::unique_lock lock(impl_->mutex);
    impl_->stopped_cv.wait(lock, [&] { return impl_->stopped; });
}

}  // namespace reflex::session

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "reflex/session/host.hpp"

namespace reflex::session {

/// WebSocket endpoint for the wire protocol plus `GET`/`PUT /files/<name>`
/// (and `GET /files` for a listing) on the same port.
class Server {
public:
    /// Port 0 picks a free port; see port().
    Server(SessionHost& host, std::string address = "127.0.0.1", unsigned short port = 0);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    unsigned short port() const;
    void start();
    void stop();
    /// Blocks until stop() is called from another thread or a signal handler.
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace reflex::session

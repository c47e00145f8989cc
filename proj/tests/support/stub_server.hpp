#pragma once

// In-process HTTP server for exercising the chat and embedding clients.

#include <atomic>
#include <functional>
#include <string>
#include <thread>

#include <httplib.h>

namespace mugi::testing {

class StubServer {
public:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    StubServer(const std::string& path, Handler handler) {
        server_.Post(path, [this, handler](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            handler(req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        url_ = "http://127.0.0.1:" + std::to_string(port_) + path;
    }

    ~StubServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    StubServer(const StubServer&) = delete;
    StubServer& operator=(const StubServer&) = delete;

    const std::string& url() const { return url_; }
    int requests() const { return requests_.load(); }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::string url_;
    std::atomic<int> requests_{0};
};

}  // namespace mugi::testing

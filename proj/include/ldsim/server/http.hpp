#pragma once

// HTTP front end of a GraphStore. The request path names the graph
// <base><path>; the X-Agent request header attributes operations.

#include <memory>
#include <string>

#include "ldsim/server/store.hpp"

namespace ldsim::server {

inline constexpr const char* kAgentHeader = "X-Agent";

class HttpServer {
public:
    explicit HttpServer(GraphStore& store, int threads = 8);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds to `port` (0 picks a free one) and returns the bound port, or
    // -1 on failure.
    int bind(const std::string& host, int port);
    // Serves in a background thread until stop().
    void start();
    // Serves on the calling thread until stop().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ldsim::server

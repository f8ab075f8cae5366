#include "ldsim/server/http.hpp"

#include <thread>

#include "httplib.h"

namespace ldsim::server {

struct HttpServer::Impl {
    GraphStore& store;
    httplib::Server http;
    std::thread thread;

    Impl(GraphStore& s, int threads) : store(s) {
        http.set_tcp_nodelay(true);
        http.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
        auto target = [this](const httplib::Request& req) {
            return store.base() + (req.path.empty() ? "" : req.path.substr(1));
        };
        auto reply = [](httplib::Response& res, const Response& r) {
            res.status = r.status;
            if (!r.body.empty()) res.set_content(r.body, r.content_type);
        };
        http.Get(".*", [=, this](const httplib::Request& req, httplib::Response& res) {
            reply(res, store.get(target(req), req.get_header_value("Accept"), req.get_header_value(kAgentHeader)));
        });
        http.Put(".*", [=, this](const httplib::Request& req, httplib::Response& res) {
            reply(res, store.put(target(req), req.body, req.get_header_value("Content-Type"),
                                 req.get_header_value(kAgentHeader)));
        });
        http.Post(".*", [=, this](const httplib::Request& req, httplib::Response& res) {
            reply(res, store.post(target(req), req.body, req.get_header_value("Content-Type"),
                                  req.get_header_value(kAgentHeader)));
        });
        http.Delete(".*", [=, this](const httplib::Request& req, httplib::Response& res) {
            reply(res, store.del(target(req), req.get_header_value(kAgentHeader)));
        });
    }
};

HttpServer::HttpServer(GraphStore& store, int threads) : impl_(std::make_unique<Impl>(store, threads)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->http.bind_to_any_port(host);
    return impl_->http.bind_to_port(host, port) ? port : -1;
}

void HttpServer::start() {
    impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
}

void HttpServer::run() { impl_->http.listen_after_bind(); }

void HttpServer::stop() {
    impl_->http.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace ldsim::server

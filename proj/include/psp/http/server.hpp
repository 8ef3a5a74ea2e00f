#pragma once

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "psp/http/message.hpp"
#include "psp/http/parser.hpp"
#include "psp/page/document.hpp"
#include "psp/prolog/database.hpp"

namespace psp::http {

struct ServerOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = 8080; // 0 picks an ephemeral port
    std::string docroot = ".";
    std::string index_file = "index.psp";
    std::uint64_t step_limit = 1'000'000;
    std::size_t max_body = 1 << 20;
    bool debug = false;  // error details in 500 bodies, extra logging
    bool occurs_check = true;
    bool quiet = false;  // no access log (used by tests)
};

// Segmented pages keyed by path, revalidated by mtime.
class DocumentCache {
public:
    using Segments = std::shared_ptr<const std::vector<page::Segment>>;

    // nullptr when the file is unreadable or malformed; `error` says why.
    Segments get(const std::string& fs_path, std::string* error);

private:
    struct Entry {
        std::filesystem::file_time_type mtime;
        Segments segments;
    };

    std::mutex mu_;
    std::unordered_map<std::string, Entry> entries_;
};

class Server {
public:
    Server(ServerOptions options,
           std::shared_ptr<const prolog::ClauseStore> base);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Binds and starts accepting; false (with *error set) on failure.
    bool start(std::string* error = nullptr);

    // Stops accepting, waits for in-flight requests, joins all threads.
    void stop();

    // The bound port; useful after starting with port 0.
    std::uint16_t port() const { return bound_port_; }

    // The socket-free request pipeline: routing, statics, page execution.
    // The connection loop and the tests share this path.
    Response handle(const Request& request);

private:
    void accept_loop();
    void serve_connection(int fd);
    Response handle_psp(const Request& request, const std::string& fs_path);
    void log_access(const std::string& method, const std::string& path,
                    int status, long long millis, std::size_t bytes);

    ServerOptions options_;
    std::shared_ptr<const prolog::ClauseStore> base_;
    DocumentCache cache_;

    int listen_fd_ = -1;
    std::uint16_t bound_port_ = 0;
    std::thread accept_thread_;
    bool stopping_ = false;
    int active_ = 0;
    std::mutex mu_;
    std::condition_variable idle_;
    std::mutex log_mu_;
};

} // namespace psp::http

#include "psp/http/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "psp/http/router.hpp"
#include "psp/web/execute.hpp"

namespace psp::http {

namespace fs = std::filesystem;

DocumentCache::Segments DocumentCache::get(const std::string& fs_path,
                                           std::string* error) {
    std::error_code ec;
    fs::file_time_type mtime = fs::last_write_time(fs_path, ec);
    if (ec) {
        *error = "cannot stat " + fs_path + ": " + ec.message();
        return nullptr;
    }
    {
        std::lock_guard lock(mu_);
        auto it = entries_.find(fs_path);
        if (it != entries_.end() && it->second.mtime == mtime)
            return it->second.segments;
    }
    std::ifstream in(fs_path, std::ios::binary);
    if (!in) {
        *error = "cannot open " + fs_path;
        return nullptr;
    }
    std::ostringstream text;
    text << in.rdbuf();
    Segments segments;
    try {
        segments = std::make_shared<const std::vector<page::Segment>>(
            page::segment_document(text.str()));
    } catch (const prolog::SyntaxError& e) {
        *error = fs_path + " line " + std::to_string(e.pos().line) +
                 ", column " + std::to_string(e.pos().column) + ": " + e.what();
        return nullptr;
    }
    std::lock_guard lock(mu_);
    entries_[fs_path] = Entry{mtime, segments};
    return segments;
}

namespace {

class FdSource : public ByteSource {
public:
    explicit FdSource(int fd) : fd_(fd) {}

    long read_some(char* buf, std::size_t len) override {
        for (;;) {
            long n = ::recv(fd_, buf, len, 0);
            if (n >= 0 || errno != EINTR)
                return n;
        }
    }

private:
    int fd_;
};

bool send_all(int fd, std::string_view data) {
    while (!data.empty()) {
        long n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            return false;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream text;
    text << in.rdbuf();
    out = text.str();
    return true;
}

// case-insensitive check that a Content-Type names the form encoding
bool is_form_content_type(const std::string& value) {
    std::string_view v(value);
    std::size_t semi = v.find(';');
    if (semi != std::string_view::npos)
        v = v.substr(0, semi);
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t'))
        v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t'))
        v.remove_suffix(1);
    constexpr std::string_view want = "application/x-www-form-urlencoded";
    if (v.size() != want.size())
        return false;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(v[i])) != want[i])
            return false;
    return true;
}

std::string iso8601_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

Server::Server(ServerOptions options,
               std::shared_ptr<const prolog::ClauseStore> base)
    : options_(std::move(options)), base_(std::move(base)) {}

Server::~Server() { stop(); }

bool Server::start(std::string* error) {
    auto fail = [&](const std::string& why) {
        if (error)
            *error = why;
        if (listen_fd_ >= 0) {
            ::close(listen_fd_);
            listen_fd_ = -1;
        }
        return false;
    };

    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0)
        return fail(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    std::string host =
        options_.host == "localhost" ? "127.0.0.1" : options_.host;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(options_.port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        return fail("invalid listen address: " + options_.host);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0)
        return fail("bind " + host + ":" + std::to_string(options_.port) +
                    ": " + std::strerror(errno));
    if (::listen(listen_fd_, 64) < 0)
        return fail(std::string("listen: ") + std::strerror(errno));

    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len) <
        0)
        return fail(std::string("getsockname: ") + std::strerror(errno));
    bound_port_ = ntohs(bound.sin_port);

    {
        std::lock_guard lock(mu_);
        stopping_ = false;
    }
    accept_thread_ = std::thread([this] { accept_loop(); });
    return true;
}

void Server::stop() {
    {
        std::lock_guard lock(mu_);
        if (stopping_ || listen_fd_ < 0)
            return;
        stopping_ = true;
    }
    ::shutdown(listen_fd_, SHUT_RDWR);
    if (accept_thread_.joinable())
        accept_thread_.join();
    ::close(listen_fd_);
    listen_fd_ = -1;
    std::unique_lock lock(mu_);
    idle_.wait(lock, [this] { return active_ == 0; });
}

void Server::accept_loop() {
    for (;;) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR)
                continue;
            return; // listener shut down (or fatal): stop accepting
        }
        timeval timeout{10, 0}; // stuck peers must not pin threads forever
        ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof timeout);
        ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &timeout, sizeof timeout);
        {
            std::lock_guard lock(mu_);
            ++active_;
        }
        std::thread([this, fd] {
            serve_connection(fd);
            std::lock_guard lock(mu_);
            if (--active_ == 0)
                idle_.notify_all();
        }).detach();
    }
}

void Server::serve_connection(int fd) {
    auto begin = std::chrono::steady_clock::now();
    FdSource source(fd);
    ParseLimits limits;
    limits.max_body = options_.max_body;
    Request request;
    int parse_status = parse_request(source, limits, request);

    Response response;
    if (parse_status != 0) {
        response = error_response(parse_status);
        if (parse_status == 405)
            response.set_header("Allow", "GET, HEAD, POST");
    } else {
        response = handle(request);
    }
    if (request.method == "HEAD")
        response.head_only = true;

    std::string wire = serialize(response);
    send_all(fd, wire);
    ::close(fd);

    auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - begin)
                      .count();
    log_access(request.method.empty() ? "-" : request.method,
               request.path.empty() ? "-" : request.path, response.status,
               millis, response.head_only ? 0 : response.body.size());
}

Response Server::handle(const Request& request) {
    Route route = route_path(options_.docroot, request.path,
                             options_.index_file);
    switch (route.kind) {
    case Route::Kind::BadPath:
        return error_response(400);
    case Route::Kind::Forbidden:
        return error_response(403);
    case Route::Kind::NotFound:
        return error_response(404);
    case Route::Kind::Static: {
        if (request.method == "POST") {
            Response resp = error_response(405);
            resp.set_header("Allow", "GET, HEAD");
            return resp;
        }
        Response resp;
        if (!read_file(route.fs_path, resp.body))
            return error_response(404);
        resp.set_header("Content-Type", route.mime);
        return resp;
    }
    case Route::Kind::Psp:
        return handle_psp(request, route.fs_path);
    }
    return error_response(500);
}

Response Server::handle_psp(const Request& request,
                            const std::string& fs_path) {
    web::PageJob job;
    try {
        if (request.method == "POST") {
            const std::string* type = request.header("content-type");
            if (!type || !is_form_content_type(*type))
                return error_response(415);
            job.form = web::decode_form(request.body);
        } else {
            job.form = web::decode_form(request.query);
        }
    } catch (const web::DecodeError& e) {
        return error_response(400, options_.debug ? e.what() : "");
    }
    for (const auto& [name, value] : request.headers) {
        if (name != "cookie")
            continue;
        for (auto& pair : web::parse_cookie_header(value))
            job.cookies.push_back(std::move(pair));
    }

    std::string cache_error;
    DocumentCache::Segments segments = cache_.get(fs_path, &cache_error);
    if (!segments)
        return error_response(500, options_.debug ? cache_error : "");

    job.segments = segments.get();
    job.base = base_;
    job.step_limit = options_.step_limit;
    job.occurs_check = options_.occurs_check;
    web::PageResult result = web::execute_page(job);

    if (options_.debug) {
        for (const std::string& note : result.notes) {
            std::lock_guard lock(log_mu_);
            std::clog << fs_path << ": " << note << '\n';
        }
    }
    if (!result.ok)
        return error_response(500, options_.debug ? result.error : "");

    Response resp;
    resp.set_header("Content-Type", "text/html");
    for (const web::CookieSpec& cookie : result.cookies)
        resp.set_header("Set-Cookie", web::format_set_cookie(cookie));
    resp.body = std::move(result.body);
    return resp;
}

void Server::log_access(const std::string& method, const std::string& path,
                        int status, long long millis, std::size_t bytes) {
    if (options_.quiet)
        return;
    std::lock_guard lock(log_mu_);
    std::clog << iso8601_now() << ' ' << method << ' ' << path << ' '
              << status << ' ' << millis << "ms " << bytes << "b\n";
}

} // namespace psp::http

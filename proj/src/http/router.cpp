#include "psp/http/router.hpp"

#include <filesystem>
#include <vector>

#include "psp/web/url.hpp"

namespace psp::http {

namespace fs = std::filesystem;

std::string mime_for(const std::string& fs_path) {
    std::size_t dot = fs_path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : fs_path.substr(dot + 1);
    for (char& c : ext)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    if (ext == "html" || ext == "htm") return "text/html";
    if (ext == "txt") return "text/plain";
    if (ext == "css") return "text/css";
    if (ext == "js") return "application/javascript";
    if (ext == "json") return "application/json";
    if (ext == "png") return "image/png";
    if (ext == "jpg" || ext == "jpeg") return "image/jpeg";
    if (ext == "gif") return "image/gif";
    if (ext == "svg") return "image/svg+xml";
    if (ext == "ico") return "image/x-icon";
    if (ext == "xml") return "text/xml";
    return "application/octet-stream";
}

Route route_path(const std::string& docroot, const std::string& raw_path,
                 const std::string& index_file) {
    std::string decoded;
    try {
        decoded = web::percent_decode(raw_path, /*plus_as_space=*/false);
    } catch (const web::DecodeError&) {
        return {Route::Kind::BadPath, {}, {}};
    }
    if (decoded.find('\0') != std::string::npos)
        return {Route::Kind::BadPath, {}, {}};

    // resolve "." and ".." without touching the filesystem; a ".." that
    // would climb above the root is refused outright
    std::vector<std::string> parts;
    std::size_t at = 0;
    while (at <= decoded.size()) {
        std::size_t slash = decoded.find('/', at);
        std::string part = decoded.substr(
            at, slash == std::string::npos ? std::string::npos : slash - at);
        if (part == "..") {
            if (parts.empty())
                return {Route::Kind::Forbidden, {}, {}};
            parts.pop_back();
        } else if (!part.empty() && part != ".") {
            parts.push_back(std::move(part));
        }
        if (slash == std::string::npos)
            break;
        at = slash + 1;
    }

    fs::path target = fs::path(docroot);
    for (const std::string& part : parts)
        target /= part;

    std::error_code ec;
    if (fs::is_directory(target, ec))
        target /= index_file;
    if (!fs::is_regular_file(target, ec))
        return {Route::Kind::NotFound, {}, {}};

    std::string fs_path = target.string();
    if (fs_path.size() >= 4 && fs_path.ends_with(".psp"))
        return {Route::Kind::Psp, fs_path, "text/html"};
    return {Route::Kind::Static, fs_path, mime_for(fs_path)};
}

} // namespace psp::http

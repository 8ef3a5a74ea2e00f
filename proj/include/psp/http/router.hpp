#pragma once

#include <string>

namespace psp::http {

// Decision for one request path against the document root.
struct Route {
    enum class Kind {
        Psp,       // render fs_path as a server page
        Static,    // serve fs_path verbatim with `mime`
        NotFound,  // no such file
        Forbidden, // path climbs out of the root
        BadPath,   // undecodable or NUL-bearing path
    };

    Kind kind = Kind::NotFound;
    std::string fs_path;
    std::string mime;
};

// Percent-decodes and lexically normalizes `raw_path` ("." and ".."
// resolved; ".." never escapes the root), maps directories to their index
// file, and classifies the target by extension. Consults the filesystem
// only for existence and directory checks.
Route route_path(const std::string& docroot, const std::string& raw_path,
                 const std::string& index_file);

// Content type by file extension; application/octet-stream when unknown.
std::string mime_for(const std::string& fs_path);

} // namespace psp::http

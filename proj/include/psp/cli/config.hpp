#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psp/http/server.hpp"

namespace psp::cli {

// Server settings plus the prelude programs loaded once at startup.
struct AppConfig {
    http::ServerOptions server;
    std::vector<std::string> preludes;
};

using ConfigPairs = std::vector<std::pair<std::string, std::string>>;

// Reads a "key = value" file: one setting per line, '#' starts a comment,
// blank lines are fine. Returns an error message, or nullopt on success.
std::optional<std::string> read_config_file(const std::string& path,
                                            ConfigPairs& out);

// Applies file settings onto `config`. Keys already pinned by a command
// line flag are reported by `overridden` and skipped. Unknown keys and
// unparsable values are errors.
std::optional<std::string>
apply_config(AppConfig& config, const ConfigPairs& pairs,
             const std::function<bool(const std::string&)>& overridden);

} // namespace psp::cli

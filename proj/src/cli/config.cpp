#include "psp/cli/config.hpp"

#include <charconv>
#include <fstream>

namespace psp::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                          s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto [end, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && end == last;
}

bool parse_bool(std::string_view text, bool& out) {
    if (text == "true" || text == "yes" || text == "on" || text == "1") {
        out = true;
        return true;
    }
    if (text == "false" || text == "no" || text == "off" || text == "0") {
        out = false;
        return true;
    }
    return false;
}

} // namespace

std::optional<std::string> read_config_file(const std::string& path,
                                            ConfigPairs& out) {
    std::ifstream in(path);
    if (!in)
        return "cannot open config file: " + path;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view text(line);
        if (std::size_t hash = text.find('#'); hash != std::string_view::npos)
            text = text.substr(0, hash);
        text = trim(text);
        if (text.empty())
            continue;
        std::size_t eq = text.find('=');
        if (eq == std::string_view::npos)
            return path + ":" + std::to_string(lineno) +
                   ": expected 'key = value'";
        std::string key(trim(text.substr(0, eq)));
        std::string value(trim(text.substr(eq + 1)));
        if (key.empty())
            return path + ":" + std::to_string(lineno) + ": empty key";
        out.emplace_back(std::move(key), std::move(value));
    }
    return std::nullopt;
}

std::optional<std::string>
apply_config(AppConfig& config, const ConfigPairs& pairs,
             const std::function<bool(const std::string&)>& overridden) {
    for (const auto& [key, value] : pairs) {
        if (overridden && overridden(key))
            continue;
        auto bad = [&](const char* what) {
            return "config key '" + key + "': " + what + ": " + value;
        };
        if (key == "host") {
            config.server.host = value;
        } else if (key == "port") {
            if (!parse_number(value, config.server.port))
                return bad("not a port number");
        } else if (key == "docroot") {
            config.server.docroot = value;
        } else if (key == "index_file") {
            config.server.index_file = value;
        } else if (key == "step_limit") {
            if (!parse_number(value, config.server.step_limit))
                return bad("not a number");
        } else if (key == "max_body") {
            if (!parse_number(value, config.server.max_body))
                return bad("not a number");
        } else if (key == "debug") {
            if (!parse_bool(value, config.server.debug))
                return bad("not a boolean");
        } else if (key == "occurs_check") {
            if (!parse_bool(value, config.server.occurs_check))
                return bad("not a boolean");
        } else if (key == "preludes") {
            // comma-separated list of program files
            config.preludes.clear();
            std::string_view rest(value);
            while (!rest.empty()) {
                std::size_t comma = rest.find(',');
                std::string_view item = trim(rest.substr(0, comma));
                if (!item.empty())
                    config.preludes.emplace_back(item);
                if (comma == std::string_view::npos)
                    break;
                rest = rest.substr(comma + 1);
            }
        } else {
            return "unknown config key: " + key;
        }
    }
    return std::nullopt;
}

} // namespace psp::cli

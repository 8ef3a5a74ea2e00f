#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "psp/cli/app.hpp"
#include "psp/cli/config.hpp"
#include "psp/http/server.hpp"
#include "psp/web/url.hpp"

namespace {

std::atomic<bool> g_shutdown{false};

void on_signal(int) { g_shutdown.store(true); }

// "name=value" → pair; everything before the first '=' is the name.
bool split_kv(const std::string& text, std::pair<std::string, std::string>& out) {
    std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        return false;
    out = {text.substr(0, eq), text.substr(eq + 1)};
    return true;
}

int run_serve(psp::cli::AppConfig& config, const std::string& port_file) {
    std::shared_ptr<const psp::prolog::ClauseStore> base;
    std::string prelude_output;
    if (auto err = psp::cli::load_preludes(
            config.preludes, config.server.step_limit,
            config.server.occurs_check, base, &prelude_output)) {
        std::cerr << "error: " << *err << '\n';
        return 2;
    }
    if (!prelude_output.empty())
        std::cerr << prelude_output << '\n';

    psp::http::Server server(config.server, base);
    std::string error;
    if (!server.start(&error)) {
        std::cerr << "error: " << error << '\n';
        return 1;
    }
    std::cerr << "listening on " << config.server.host << ":" << server.port()
              << '\n';
    if (!port_file.empty()) {
        std::ofstream pf(port_file);
        pf << server.port() << '\n';
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_shutdown.load())
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    std::cerr << "shutting down\n";
    server.stop();
    return 0;
}

int run_render(psp::cli::AppConfig& config, const std::string& file,
               const std::vector<std::string>& args,
               const std::vector<std::string>& cookies) {
    psp::cli::RenderRequest request;
    request.file = file;
    for (const std::string& a : args) {
        std::pair<std::string, std::string> kv;
        if (!split_kv(a, kv)) {
            std::cerr << "error: --arg expects name=value, got: " << a << '\n';
            return 2;
        }
        request.form.push_back(std::move(kv));
    }
    for (const std::string& c : cookies) {
        std::pair<std::string, std::string> kv;
        if (!split_kv(c, kv)) {
            std::cerr << "error: --cookie expects name=value, got: " << c
                      << '\n';
            return 2;
        }
        request.cookies.push_back(std::move(kv));
    }

    std::shared_ptr<const psp::prolog::ClauseStore> base;
    std::string prelude_output;
    if (auto err = psp::cli::load_preludes(
            config.preludes, config.server.step_limit,
            config.server.occurs_check, base, &prelude_output)) {
        std::cerr << "error: " << *err << '\n';
        return 2;
    }
    if (!prelude_output.empty())
        std::cerr << prelude_output << '\n';

    return psp::cli::render_once(config, base, request, std::cout, std::cerr);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prolog server pages: a web server and page renderer"};
    app.require_subcommand(1);

    psp::cli::AppConfig config;
    std::string config_path;

    // shared engine/server settings; attached to both subcommands
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "configuration file (key = value lines)");
        cmd->add_option("--root", config.server.docroot, "document root");
        cmd->add_option("--prelude", config.preludes,
                        "Prolog program loaded at startup (repeatable)");
        cmd->add_option("--step-limit", config.server.step_limit,
                        "inference steps allowed per request");
        cmd->add_option("--index", config.server.index_file,
                        "file served for directory requests");
        cmd->add_option("--max-body", config.server.max_body,
                        "largest accepted request body, bytes");
        cmd->add_flag("--debug", config.server.debug,
                      "verbose logging and error details in responses");
        cmd->add_flag("!--no-occurs-check", config.server.occurs_check,
                      "disable the occurs check during unification");
    };

    CLI::App* serve = app.add_subcommand("serve", "run the web server");
    add_common(serve);
    serve->add_option("--host", config.server.host, "listen address");
    serve->add_option("--port", config.server.port,
                      "listen port (0 picks one)");
    std::string port_file;
    serve->add_option("--port-file", port_file,
                      "write the bound port to this file after startup");
    serve->add_flag("--quiet", config.server.quiet, "suppress the access log");

    CLI::App* render = app.add_subcommand(
        "render", "render one page to stdout and exit");
    add_common(render);
    std::string render_file;
    std::string method = "GET";
    std::vector<std::string> form_args;
    std::vector<std::string> cookie_args;
    render->add_option("file", render_file, "page to render")->required();
    render->add_option("--method", method, "request method to simulate")
        ->check(CLI::IsMember({"GET", "POST", "HEAD"}));
    render->add_option("--arg", form_args,
                       "form/query pair name=value (repeatable)");
    render->add_option("--cookie", cookie_args,
                       "request cookie name=value (repeatable)");

    CLI11_PARSE(app, argc, argv);

    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) {
        psp::cli::ConfigPairs pairs;
        if (auto err = psp::cli::read_config_file(config_path, pairs)) {
            std::cerr << "error: " << *err << '\n';
            return 2;
        }
        // a config value never overrides an explicit flag
        auto overridden = [&](const std::string& key) {
            static const std::unordered_map<std::string, std::string> flags = {
                {"host", "--host"},         {"port", "--port"},
                {"docroot", "--root"},      {"index_file", "--index"},
                {"step_limit", "--step-limit"},
                {"max_body", "--max-body"}, {"debug", "--debug"},
                {"occurs_check", "--no-occurs-check"},
                {"preludes", "--prelude"},
            };
            auto it = flags.find(key);
            if (it == flags.end())
                return false;
            const CLI::Option* opt = active->get_option_no_throw(it->second);
            return opt != nullptr && opt->count() > 0;
        };
        if (auto err = psp::cli::apply_config(config, pairs, overridden)) {
            std::cerr << "error: " << config_path << ": " << *err << '\n';
            return 2;
        }
    }

    if (serve->parsed())
        return run_serve(config, port_file);
    return run_render(config, render_file, form_args, cookie_args);
}

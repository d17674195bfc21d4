#include "commands.hpp"

#include <rlf/error.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <functional>

int main(int argc, char** argv) {
    CLI::App app{"Reflectionless filter synthesis, analysis and calibration toolkit", "rlfilt"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "rlfilt 0.1.0");

    rlfcli::Context ctx;
    app.add_option("--threads", ctx.threads, "Worker threads (0 = all cores); results do not depend on it")
        ->check(CLI::NonNegativeNumber);

    std::function<void()> run;
    rlfcli::register_commands(app, ctx, run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        run();
    } catch (const rlfcli::UsageError& e) {
        std::fprintf(stderr, "rlfilt: %s\n", e.what());
        return 2;
    } catch (const rlf::Error& e) {
        std::fprintf(stderr, "rlfilt: error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rlfilt: error: %s\n", e.what());
        return 1;
    }
    return 0;
}

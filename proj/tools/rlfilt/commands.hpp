#pragma once

#include <rlf/parallel.hpp>

#include <functional>
#include <stdexcept>

namespace CLI {
class App;
}

namespace rlfcli {

struct Context {
    unsigned threads = 1;

    [[nodiscard]] rlf::Parallelism parallelism() const { return rlf::Parallelism{threads}; }
};

/// Bad flag combinations detected after parsing; exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void register_commands(CLI::App& app, Context& ctx, std::function<void()>& run);

}  // namespace rlfcli

#pragma once

#include <stdexcept>
#include <string>

namespace oscres {

// Error categories map 1:1 to CLI exit codes (see tools/main.cpp).
enum class ErrorCategory {
    config  = 2,  // invalid parameters, violated invariants, bad config files
    runtime = 3,  // simulation failures (stalled network, budget exceeded)
    io      = 4,  // unreadable/unwritable files, malformed data files
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, std::string msg)
        : std::runtime_error(std::move(msg)), category_(cat) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct ConfigError : Error {
    explicit ConfigError(std::string msg) : Error(ErrorCategory::config, std::move(msg)) {}
};

struct SimulationError : Error {
    explicit SimulationError(std::string msg) : Error(ErrorCategory::runtime, std::move(msg)) {}
};

struct IoError : Error {
    explicit IoError(std::string msg) : Error(ErrorCategory::io, std::move(msg)) {}
};

} // namespace oscres

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cgmos {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    Parse,
    Io,
    DegenerateDataset,
    Parameter,
    InfeasibleStratification,
    InfeasibleSynthesis,
    DivisionGuard,
    InsufficientData,
    DimensionMismatch,
    Verification,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace cgmos

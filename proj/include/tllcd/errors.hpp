#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tllcd {

enum class ErrorKind {
    contract,
    range,
    luttinger_instability,
    cd_instability,
    integration,
    config,
    io,
    validation,
    cutoff_unsafe,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error raised by the library. The message is prefixed with the
/// kebab-case kind tag so that callers matching on text (and humans reading
/// logs) see e.g. "luttinger-instability: ...".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, const std::string& what) {
    if (!condition) fail(ErrorKind::contract, what);
}

/// Warnings are printed to stderr unless silenced (tests silence them).
void warn(std::string_view message);
void set_warnings_enabled(bool enabled);

}  // namespace tllcd

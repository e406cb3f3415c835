#include "tllcd/errors.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace tllcd {

namespace {
std::atomic<bool> g_warnings_enabled{true};
std::mutex g_warn_mutex;
}  // namespace

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::contract: return "contract";
        case ErrorKind::range: return "range";
        case ErrorKind::luttinger_instability: return "luttinger-instability";
        case ErrorKind::cd_instability: return "cd-instability";
        case ErrorKind::integration: return "integration";
        case ErrorKind::config: return "config";
        case ErrorKind::io: return "io";
        case ErrorKind::validation: return "validation";
        case ErrorKind::cutoff_unsafe: return "cutoff-unsafe";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

void warn(std::string_view message) {
    if (!g_warnings_enabled.load(std::memory_order_relaxed)) return;
    std::lock_guard lock(g_warn_mutex);
    std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings_enabled.store(enabled); }

}  // namespace tllcd

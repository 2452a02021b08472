#include "engage/log.hpp"

#include <cstdlib>
#include <iostream>

namespace engage {

LogLevel log_threshold() {
    static const LogLevel threshold = [] {
        const char* env = std::getenv("ENGAGE_LOG");
        const std::string value = env ? env : "";
        if (value == "debug") return LogLevel::debug;
        if (value == "info") return LogLevel::info;
        if (value == "error") return LogLevel::error;
        return LogLevel::warn;
    }();
    return threshold;
}

void log(LogLevel level, const std::string& message) {
    if (level < log_threshold()) return;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::cerr << "[" << names[static_cast<int>(level)] << "] " << message
              << "\n";
}

}  // namespace engage

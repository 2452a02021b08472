#pragma once

#include <string>

namespace engage {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3 };

// Threshold comes from ENGAGE_LOG (debug|info|warn|error), default warn.
LogLevel log_threshold();

void log(LogLevel level, const std::string& message);

inline void log_debug(const std::string& m) { log(LogLevel::debug, m); }
inline void log_info(const std::string& m) { log(LogLevel::info, m); }
inline void log_warn(const std::string& m) { log(LogLevel::warn, m); }
inline void log_error(const std::string& m) { log(LogLevel::error, m); }

}  // namespace engage

#pragma once

#include <functional>
#include <string>

namespace sepsis {

enum class LogLevel { kInfo, kWarning };

// Process-wide diagnostic sink. Defaults to stderr; tests swap it out to
// capture events.
using LogSink = std::function<void(LogLevel, const std::string&)>;
LogSink set_log_sink(LogSink sink);
void log(LogLevel level, const std::string& message);
inline void log_info(const std::string& m) { log(LogLevel::kInfo, m); }
inline void log_warning(const std::string& m) { log(LogLevel::kWarning, m); }

}  // namespace sepsis

#pragma once

#include <functional>
#include <string>

namespace hetfb {

enum class LogLevel { debug = 0, info = 1, warning = 2, error = 3 };

using LogSink = std::function<void(LogLevel, const std::string&)>;

// Replaces the process-wide sink. An empty sink restores the stderr default.
void set_log_sink(LogSink sink);
void log_message(LogLevel level, const std::string& message);

}  // namespace hetfb

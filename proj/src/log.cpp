#include "hetfb/log.hpp"

#include <cstdio>
#include <mutex>

namespace hetfb {
namespace {

std::mutex g_sink_mutex;
LogSink g_sink;

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::debug: return "debug";
    case LogLevel::info: return "info";
    case LogLevel::warning: return "warning";
    case LogLevel::error: return "error";
  }
  return "?";
}

}  // namespace

void set_log_sink(LogSink sink) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  g_sink = std::move(sink);
}

void log_message(LogLevel level, const std::string& message) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  if (g_sink) {
    g_sink(level, message);
    return;
  }
  if (level >= LogLevel::warning) std::fprintf(stderr, "hetfb %s: %s\n", level_name(level), message.c_str());
}

}  // namespace hetfb

#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace saddlekit {

// Log level from SADDLEKIT_LOG in {error, warn, info, debug}; default warn.
inline int log_level() {
  static int level = [] {
    const char* env = std::getenv("SADDLEKIT_LOG");
    if (!env) return 1;
    if (std::strcmp(env, "error") == 0) return 0;
    if (std::strcmp(env, "warn") == 0) return 1;
    if (std::strcmp(env, "info") == 0) return 2;
    if (std::strcmp(env, "debug") == 0) return 3;
    return 1;
  }();
  return level;
}

template <typename... Args>
void log_at(int level, const char* tag, const char* fmt, Args... args) {
  if (log_level() < level) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fprintf(stderr, "\n");
}

#define SADDLEKIT_LOG_ERROR(...) ::saddlekit::log_at(0, "error", __VA_ARGS__)
#define SADDLEKIT_LOG_WARN(...) ::saddlekit::log_at(1, "warn", __VA_ARGS__)
#define SADDLEKIT_LOG_INFO(...) ::saddlekit::log_at(2, "info", __VA_ARGS__)
#define SADDLEKIT_LOG_DEBUG(...) ::saddlekit::log_at(3, "debug", __VA_ARGS__)

}  // namespace saddlekit

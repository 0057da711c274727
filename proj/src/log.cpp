#include "durable/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace durable {

LogLevel logLevel() {
  static LogLevel level = [] {
    const char* env = std::getenv("DP_LOG");
    if (env == nullptr || std::strcmp(env, "off") == 0 || *env == '\0') return LogLevel::Off;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    std::fprintf(stderr, "[dp] unknown DP_LOG value '%s', logging disabled\n", env);
    return LogLevel::Off;
  }();
  return level;
}

void logLine(LogLevel level, const std::string& msg) {
  static std::mutex mu;
  const char* tag = level == LogLevel::Debug ? "debug" : "info";
  std::lock_guard<std::mutex> lk(mu);
  std::fprintf(stderr, "[dp %s] %s\n", tag, msg.c_str());
}

}  // namespace durable

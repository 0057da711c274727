#pragma once

// Logging to stderr, gated by the DP_LOG environment variable
// (off | info | debug; default off).

#include <sstream>
#include <string>

namespace durable {

enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

LogLevel logLevel();
void logLine(LogLevel level, const std::string& msg);

}  // namespace durable

#define DP_LOG_AT(lvl, expr)                                   \
  do {                                                         \
    if (::durable::logLevel() >= (lvl)) {                      \
      std::ostringstream oss__;                                \
      oss__ << expr;                                           \
      ::durable::logLine((lvl), oss__.str());                  \
    }                                                          \
  } while (0)

#define DP_LOG_INFO(expr) DP_LOG_AT(::durable::LogLevel::Info, expr)
#define DP_LOG_DEBUG(expr) DP_LOG_AT(::durable::LogLevel::Debug, expr)

#pragma once

#include <sstream>
#include <string>

namespace pucs {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Active level from the PUCS_LOG environment variable ("error", "info",
// "debug"); unset or unrecognized values mean "error". Read once.
LogLevel log_level();

// Writes "[level] message" to stderr when level is enabled.
void log_msg(LogLevel level, const std::string& message);

}  // namespace pucs

#define PUCS_LOG_AT(level, expr)                                   \
  do {                                                             \
    if (static_cast<int>(level) <=                                 \
        static_cast<int>(::pucs::log_level())) {                   \
      std::ostringstream pucs_log_oss_;                            \
      pucs_log_oss_ << expr;                                       \
      ::pucs::log_msg(level, pucs_log_oss_.str());                 \
    }                                                              \
  } while (0)

#define PUCS_LOG_ERROR(expr) PUCS_LOG_AT(::pucs::LogLevel::Error, expr)
#define PUCS_LOG_INFO(expr) PUCS_LOG_AT(::pucs::LogLevel::Info, expr)
#define PUCS_LOG_DEBUG(expr) PUCS_LOG_AT(::pucs::LogLevel::Debug, expr)

#pragma once

#include <cstdarg>

namespace injnorm {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Current verbosity, read once from the INJNORM_LOG environment variable
/// (error | info | debug, default error).
LogLevel log_level();

void log_msg(LogLevel level, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

#define INJNORM_LOG_INFO(...) ::injnorm::log_msg(::injnorm::LogLevel::info, __VA_ARGS__)
#define INJNORM_LOG_DEBUG(...) ::injnorm::log_msg(::injnorm::LogLevel::debug, __VA_ARGS__)
#define INJNORM_LOG_ERROR(...) ::injnorm::log_msg(::injnorm::LogLevel::error, __VA_ARGS__)

}  // namespace injnorm

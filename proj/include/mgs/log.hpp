#pragma once

#include <string_view>

namespace mgs::log {

enum class Level { Quiet = 0, Warn = 1, Info = 2, Debug = 3 };

/// Read once from MGS_LOG_LEVEL (quiet, warn, info, debug); defaults to warn.
Level level();

void warn(std::string_view msg);
void info(std::string_view msg);
void debug(std::string_view msg);

}  // namespace mgs::log

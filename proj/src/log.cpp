#include "mgs/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace mgs::log {

namespace {

Level parse_level() {
  const char* env = std::getenv("MGS_LOG_LEVEL");
  if (env == nullptr) return Level::Warn;
  const std::string v(env);
  if (v == "quiet" || v == "0") return Level::Quiet;
  if (v == "info" || v == "2") return Level::Info;
  if (v == "debug" || v == "3") return Level::Debug;
  return Level::Warn;
}

void emit(Level at, std::string_view tag, std::string_view msg) {
  if (static_cast<int>(level()) < static_cast<int>(at)) return;
  std::cerr << "[mgs " << tag << "] " << msg << '\n';
}

}  // namespace

Level level() {
  static const Level lvl = parse_level();
  return lvl;
}

void warn(std::string_view msg) { emit(Level::Warn, "warn", msg); }
void info(std::string_view msg) { emit(Level::Info, "info", msg); }
void debug(std::string_view msg) { emit(Level::Debug, "debug", msg); }

}  // namespace mgs::log

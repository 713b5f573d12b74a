#pragma once

#include <fmt/core.h>

#include <string_view>

namespace mlsvm::log {

enum class level { quiet = 0, warn = 1, info = 2, debug = 3 };

void set_level(level lvl);
level current_level();
void write(level lvl, std::string_view message);

template <typename... Args>
void warn(fmt::format_string<Args...> f, Args&&... args) {
    if (current_level() >= level::warn) write(level::warn, fmt::format(f, std::forward<Args>(args)...));
}

template <typename... Args>
void info(fmt::format_string<Args...> f, Args&&... args) {
    if (current_level() >= level::info) write(level::info, fmt::format(f, std::forward<Args>(args)...));
}

template <typename... Args>
void debug(fmt::format_string<Args...> f, Args&&... args) {
    if (current_level() >= level::debug) write(level::debug, fmt::format(f, std::forward<Args>(args)...));
}

}  // namespace mlsvm::log

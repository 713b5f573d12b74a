#include "mlsvm/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

namespace mlsvm::log {
namespace {
std::atomic<level> g_level{level::warn};
std::mutex g_mutex;
}  // namespace

void set_level(level lvl) { g_level.store(lvl); }
level current_level() { return g_level.load(std::memory_order_relaxed); }

void write(level lvl, std::string_view message) {
    const char* tag = lvl == level::warn ? "warning" : lvl == level::info ? "info" : "debug";
    std::lock_guard lock(g_mutex);
    std::fprintf(stderr, "[%s] %.*s\n", tag, static_cast<int>(message.size()), message.data());
}

}  // namespace mlsvm::log

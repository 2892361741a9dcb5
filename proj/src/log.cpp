#include "colexforge/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace colexforge::log {
namespace {

std::atomic<Level> g_level{Level::Warn};
std::mutex g_mutex;

void emit(std::string_view tag, std::string_view message) {
    std::lock_guard lock(g_mutex);
    std::cerr << "[colexforge] " << tag << ": " << message << '\n';
}

}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void warn(std::string_view message) {
    if (g_level >= Level::Warn) emit("warning", message);
}

void info(std::string_view message) {
    if (g_level >= Level::Info) emit("info", message);
}

}  // namespace colexforge::log

#include "vqcfd/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace vqcfd {

namespace {
std::mutex g_mutex;
WarningHandler &handler_slot() {
  static WarningHandler h = [](const std::string &m) {
    std::cerr << "vqcfd warning: " << m << '\n';
  };
  return h;
}
} // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(g_mutex);
  auto old = std::move(handler_slot());
  handler_slot() = std::move(handler);
  return old;
}

void warn(const std::string &message) {
  std::lock_guard lock(g_mutex);
  if (handler_slot())
    handler_slot()(message);
}

} // namespace vqcfd

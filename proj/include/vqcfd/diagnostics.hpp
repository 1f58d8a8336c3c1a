#pragma once

#include <functional>
#include <string>

namespace vqcfd {

using WarningHandler = std::function<void(const std::string &)>;

/// Installs the sink for non-fatal numerical warnings and returns the previous
/// one. The default handler prints to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string &message);

} // namespace vqcfd

#pragma once

#include <functional>
#include <string_view>

namespace cgmos {

using WarningHandler = std::function<void(std::string_view)>;

/// Reports a recoverable degenerate case (fallbacks and the like). Writes to
/// stderr unless a handler is installed.
void warn(std::string_view message);

/// Installs a process-wide handler; returns the previous one. Pass an empty
/// function to restore the stderr default.
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace cgmos

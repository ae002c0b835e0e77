#pragma once

#include <functional>
#include <string_view>

namespace ghostphase {

using WarningHandler = std::function<void(std::string_view)>;

// Installs a process-wide sink for non-fatal diagnostics (edge leakage,
// non-degenerate pump overrides). Passing an empty handler restores the
// default, which writes to stderr. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace ghostphase

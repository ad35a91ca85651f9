#ifndef BKNN_DIAGNOSTICS_HPP
#define BKNN_DIAGNOSTICS_HPP

#include <functional>
#include <string>
#include <string_view>

namespace bknn {

using WarningHandler = std::function<void(std::string_view)>;

/// Report a non-fatal condition. Thread-safe. Defaults to stderr.
void warn(std::string_view message);

/// Install a process-wide handler; returns the previous one. An empty
/// handler silences warnings.
WarningHandler set_warning_handler(WarningHandler handler);

/// Installs a handler for the lifetime of the guard.
class ScopedWarningHandler {
public:
  explicit ScopedWarningHandler(WarningHandler handler)
      : previous_(set_warning_handler(std::move(handler))) {}
  ~ScopedWarningHandler() { set_warning_handler(std::move(previous_)); }
  ScopedWarningHandler(const ScopedWarningHandler &) = delete;
  ScopedWarningHandler &operator=(const ScopedWarningHandler &) = delete;

private:
  WarningHandler previous_;
};

} // namespace bknn

#endif

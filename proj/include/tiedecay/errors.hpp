#pragma once

#include <stdexcept>
#include <functional>
#include <string>
#include <string_view>

namespace tiedecay {

// Argument violates an operation's precondition (bad index, unreachable state).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters lie outside the region where a closed form is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Scheme or solver configuration that would break positivity/stability.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative method stopped without meeting its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Non-fatal diagnostics (e.g. an approximation used outside its regime).
// The default handler writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace tiedecay

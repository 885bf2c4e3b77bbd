#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlslab {

enum class ErrorKind {
  invalid_argument,
  bracket_not_found,
  non_convergence,
  window_too_small,
  singular_system,
  omega_out_of_range,
  unresolved_bubbles,
  bubble_leaves_box,
  scale_under_resolved,
  newton_divergence,
  step_underflow,
  same_sign_endpoints,
  nan_detected,
  blow_up_guard,
  insufficient_samples,
  resample_under_resolved,
  newton_stall,
  outside_closeness_window,
  missing_column,
  config_error,
  io_error,
};

std::string_view to_string(ErrorKind kind);

// Numerical failures are the kinds a caller may retry with different
// parameters; everything else is a usage or configuration problem.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::invalid_argument, what);
}

}  // namespace nlslab

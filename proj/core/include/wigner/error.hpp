#pragma once

#include <stdexcept>
#include <string>

namespace wigner {

enum class ErrorCode {
  invalid_argument,
  invalid_spec,
  limit_exceeded,
  budget_exceeded,
  not_connected,
  insufficient_samples,
  empty_input,
  empty_grid,
  unsupported,
  unbounded_potential,
  backend_failure,
  on_cut,
  odd_order,
  truncation_too_small,
  insufficient_order,
  propagation_violation,
  io_failure,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wigner

#pragma once

#include <stdexcept>
#include <string>

namespace eigadm {

enum class Errc {
  invalid_dimension,
  invalid_parameter,
  invalid_input,
  invalid_config,
  dimension_mismatch,
  io_failure,
};

/// Single exception type for the library; `code()` tells callers which
/// precondition was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace eigadm

#pragma once

#include <stdexcept>
#include <string>

namespace wpa {

enum class errc {
  unsupported_order,
  domain_error,
  grid_too_small,
  bracket_failure,
  non_convergence,
  out_of_range,
  loss_of_orthogonality,
  degree_out_of_range,
  irls_non_convergence,
  norm_diverges,
  hypothesis_fail,
  precondition_fail,
  order_unavailable,
  syntax_error,
  unknown_function,
  non_differentiable,
  bad_config,
  io_error,
};

const char* errc_name(errc c);

// All library failures surface as Error, tagged with the module that raised
// it and a stable code so the CLI can emit {module, code, message}.
class Error : public std::runtime_error {
 public:
  Error(std::string module, errc code, std::string message, long position = -1)
      : std::runtime_error(module + ": " + std::string(errc_name(code)) + ": " + message),
        module_(std::move(module)),
        code_(code),
        message_(std::move(message)),
        position_(position) {}

  const std::string& module() const { return module_; }
  errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }
  const std::string& detail() const { return message_; }
  long position() const { return position_; }

 private:
  std::string module_;
  errc code_;
  std::string message_;
  long position_;
};

}  // namespace wpa

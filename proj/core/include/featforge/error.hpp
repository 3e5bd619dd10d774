#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace featforge {

enum class Errc {
  node_out_of_range,
  self_loop,
  disconnected,
  infeasible_degree,
  retries_exhausted,
  invalid_parameter,
  no_feasible_degree,
  graph_too_large,
  dim_too_small,
  row_count_mismatch,
  degenerate_labels,
  missing_scheme,
  io_error,
  schema_error,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace featforge

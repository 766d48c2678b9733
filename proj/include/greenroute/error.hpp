#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace greenroute {

enum class Errc {
  invalid_instance,
  domain_error,
  exceeds_max_rate,
  degenerate_domain,
  infeasible_no_path,
  non_convex_objective,
  malformed_flow,
  no_path_to_sample,
  rate_overflow,
  no_feasible_rounding,
  oracle_budget_exceeded,
  generation_failed,
  invalid_argument,
  internal,
};

std::string_view to_string(Errc code);

/// Every module reports failures through this exception. The code is stable
/// and is what the CLI prints in its error JSON.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace greenroute

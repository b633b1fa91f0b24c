#pragma once

#include <stdexcept>
#include <string>

namespace rsg {

enum class ErrorCode {
  degree_zero,         // constant polynomial where roots were requested
  non_convergence,     // root finder failed to meet its residual target
  pole_derivative,     // euclidean derivative requested at a pole
  empty_word,
  budget_exceeded,     // exhaustive tree expansion would blow the node budget
  no_repelling_fixed_point,
  empty_cloud,
  degenerate_fit,
  series_not_decaying, // Poincare series terms not decaying (s too close to pressure)
  forbidden_pair,      // family constructor called with (d1, d) = (2, 2)
  nonpositive_radius,
  all_candidates_rejected,
  inconclusive,        // no grid point exhibits geometric decay
  unknown_name,
  schema,              // config validation failure
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

const char* error_code_name(ErrorCode code);

}  // namespace rsg

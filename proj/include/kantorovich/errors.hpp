#pragma once

#include <stdexcept>
#include <string>

namespace kantorovich {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  Positivity,
  Degenerate,
  Balance,
  Layout,
  Bracket,
  Evaluation,
  Quadrature,
  Root,
  InfeasibleStress,
  State,
  Config,
  Io,
  Feasibility,
  Unsupported,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when adaptive refinement hits the depth cap before the error target.
// Carries the best available estimate so callers can decide whether it is usable.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : Error(ErrorCode::Quadrature, what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

}  // namespace kantorovich

#include "kantorovich/errors.hpp"

namespace kantorovich {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Positivity: return "positivity";
    case ErrorCode::Degenerate: return "degenerate_density";
    case ErrorCode::Balance: return "balance";
    case ErrorCode::Layout: return "layout";
    case ErrorCode::Bracket: return "bracket";
    case ErrorCode::Evaluation: return "evaluation";
    case ErrorCode::Quadrature: return "quadrature";
    case ErrorCode::Root: return "root";
    case ErrorCode::InfeasibleStress: return "infeasible_stress";
    case ErrorCode::State: return "state";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    case ErrorCode::Feasibility: return "feasibility";
    case ErrorCode::Unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace kantorovich

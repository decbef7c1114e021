#include "hitchin/error.hpp"

namespace hitchin {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidRank: return "InvalidRank";
    case ErrorKind::UnsupportedSeries: return "UnsupportedSeries";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::RootSolveFailure: return "RootSolveFailure";
    case ErrorKind::SheetAmbiguity: return "SheetAmbiguity";
    case ErrorKind::OnBranchPoint: return "OnBranchPoint";
    case ErrorKind::OnRamification: return "OnRamification";
    case ErrorKind::SingularConfiguration: return "SingularConfiguration";
    case ErrorKind::LambdaCollision: return "LambdaCollision";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::StencilFailure: return "StencilFailure";
    case ErrorKind::PathInstability: return "PathInstability";
    case ErrorKind::UnreachableSheet: return "UnreachableSheet";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::InvalidRank:
    case ErrorKind::UnsupportedSeries:
    case ErrorKind::DegenerateCurve:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace hitchin

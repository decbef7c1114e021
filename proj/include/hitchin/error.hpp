#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hitchin {

enum class ErrorKind {
  // input / validation
  InvalidInput,
  InvalidRank,
  UnsupportedSeries,
  DegenerateCurve,
  // numerical
  RootSolveFailure,
  SheetAmbiguity,
  OnBranchPoint,
  OnRamification,
  SingularConfiguration,
  LambdaCollision,
  NonConvergence,
  QuadratureFailure,
  StencilFailure,
  PathInstability,
  UnreachableSheet,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for errors caused by the caller's data rather than by a numerical
/// procedure giving up.
bool is_input_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hitchin

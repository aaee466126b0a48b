#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace casimir {

/// Failure categories raised by the library. The names are stable and are
/// printed verbatim by the command-line tool.
enum class ErrorKind {
  InvalidModel,
  InvalidArgument,
  EvalAtZero,
  IdealMetalHasNoEpsilon,
  TabulatedOutOfRange,
  EmptyTable,
  UnsupportedModel,
  ZeroFrequency,
  DegenerateSweep,
  NonPositiveData,
  NoConvergence,
  NoPlateau,
  SurfaceContact,
  ConfigParse,
};

std::string_view error_name(ErrorKind kind);

/// True for failures of a numerical procedure (as opposed to bad input).
bool is_numerical_failure(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace casimir

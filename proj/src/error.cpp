#include "casimir/error.hpp"

namespace casimir {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidModel: return "InvalidModel";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::EvalAtZero: return "EvalAtZero";
  case ErrorKind::IdealMetalHasNoEpsilon: return "IdealMetalHasNoEpsilon";
  case ErrorKind::TabulatedOutOfRange: return "TabulatedOutOfRange";
  case ErrorKind::EmptyTable: return "EmptyTable";
  case ErrorKind::UnsupportedModel: return "UnsupportedModel";
  case ErrorKind::ZeroFrequency: return "ZeroFrequency";
  case ErrorKind::DegenerateSweep: return "DegenerateSweep";
  case ErrorKind::NonPositiveData: return "NonPositiveData";
  case ErrorKind::NoConvergence: return "NoConvergence";
  case ErrorKind::NoPlateau: return "NoPlateau";
  case ErrorKind::SurfaceContact: return "SurfaceContact";
  case ErrorKind::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

bool is_numerical_failure(ErrorKind kind) {
  return kind == ErrorKind::NoConvergence || kind == ErrorKind::NoPlateau ||
         kind == ErrorKind::NonPositiveData || kind == ErrorKind::DegenerateSweep;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

} // namespace casimir

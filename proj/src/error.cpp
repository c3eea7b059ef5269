#include "memkernel/error.hpp"

namespace memkernel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateParametrization: return "DegenerateParametrization";
    case ErrorCode::NonPeriodicGrid: return "NonPeriodicGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::IncompatibleGrid: return "IncompatibleGrid";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::MissingJets: return "MissingJets";
    case ErrorCode::NotClosedSurface: return "NotClosedSurface";
    case ErrorCode::NotReparametrizationInvariant: return "NotReparametrizationInvariant";
    case ErrorCode::UnsupportedTerm: return "UnsupportedTerm";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace memkernel

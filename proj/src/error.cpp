#include "riskdyn/error.hpp"

namespace riskdyn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::Io: return "Io";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::MissingAssignment: return "MissingAssignment";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonBinary: return "NonBinary";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::OneClassOnly: return "OneClassOnly";
    case ErrorCode::SingleCluster: return "SingleCluster";
    case ErrorCode::EmptySourceCluster: return "EmptySourceCluster";
    case ErrorCode::AllHidden: return "AllHidden";
    case ErrorCode::NoVisibleLabels: return "NoVisibleLabels";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotConverged: return "NotConverged";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownVariable:
      return 1;
    case ErrorCode::ZeroVariance:
    case ErrorCode::RankDeficient:
    case ErrorCode::NotConverged:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace riskdyn

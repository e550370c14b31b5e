#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace riskdyn {

enum class ErrorCode {
  // usage
  InvalidConfig,
  UnknownVariable,
  // data
  MissingFile,
  Io,
  ParseError,
  MissingColumn,
  EmptyDataset,
  DuplicateKey,
  EmptySplit,
  UnknownCategory,
  MissingAssignment,
  LengthMismatch,
  NonBinary,
  DimensionMismatch,
  TooFewRows,
  TooFewValues,
  OneClassOnly,
  SingleCluster,
  EmptySourceCluster,
  AllHidden,
  NoVisibleLabels,
  // numerical
  ZeroVariance,
  RankDeficient,
  NotConverged,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Process exit status for an error category: 1 usage, 2 data, 3 numerical.
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace riskdyn

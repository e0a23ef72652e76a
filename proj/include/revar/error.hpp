#pragma once

#include <stdexcept>
#include <string>

namespace revar {

enum class ErrorKind {
  NotPSD,
  Singular,
  RankDeficient,
  TooShort,
  SingularGram,
  BadRank,
  BadDims,
  DegenerateCandidate,
  NotSemiorthogonal,
  DimensionMismatch,
  ZeroSE,
  CannotStabilize,
  BadFamily,
  BadHorizon,
  InvalidArgument,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every library failure surfaces as this exception; `kind()` is stable and
/// machine-readable, `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace revar

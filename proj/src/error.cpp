#include "revar/error.hpp"

namespace revar {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::BadRank: return "BadRank";
    case ErrorKind::BadDims: return "BadDims";
    case ErrorKind::DegenerateCandidate: return "DegenerateCandidate";
    case ErrorKind::NotSemiorthogonal: return "NotSemiorthogonal";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroSE: return "ZeroSE";
    case ErrorKind::CannotStabilize: return "CannotStabilize";
    case ErrorKind::BadFamily: return "BadFamily";
    case ErrorKind::BadHorizon: return "BadHorizon";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace revar

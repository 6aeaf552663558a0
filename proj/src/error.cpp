#include "qlsp/error.hpp"

namespace qlsp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSingular: return "Singular";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNormalizationError: return "NormalizationError";
    case ErrorCode::kWrongClass: return "WrongClass";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kInvalidP: return "InvalidP";
    case ErrorCode::kInvalidPlan: return "InvalidPlan";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kTargetUnreachable: return "TargetUnreachable";
    case ErrorCode::kDegenerateFit: return "DegenerateFit";
  }
  return "Unknown";
}

}  // namespace qlsp

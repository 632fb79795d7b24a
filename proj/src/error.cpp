#include "dpk/error.hpp"

namespace dpk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Alignment: return "AlignmentError";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::NotInDpk: return "NotInDpk";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BadResidue: return "BadResidue";
    case ErrorCode::ModelViolation: return "ModelViolation";
    case ErrorCode::NotProjection: return "NotProjection";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::IndexNotZero: return "IndexNotZero";
    case ErrorCode::InsufficientRoom: return "InsufficientRoom";
    case ErrorCode::NotConjugate: return "NotConjugate";
    case ErrorCode::ModelLimitation: return "ModelLimitation";
    case ErrorCode::NotDpkAutomorphism: return "NotDpkAutomorphism";
    case ErrorCode::NotInBall: return "NotInBall";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::NotOrthogonalPatterns: return "NotOrthogonalPatterns";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Parse: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace dpk

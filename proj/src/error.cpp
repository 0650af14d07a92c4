#include "billiards/error.hpp"

namespace billiards {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ClosureViolation: return "ClosureViolation";
    case ErrorCode::SelfIntersection: return "SelfIntersection";
    case ErrorCode::AngleSumMismatch: return "AngleSumMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonpositiveLength: return "NonpositiveLength";
    case ErrorCode::CannotBalance: return "CannotBalance";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::OrbitExplosion: return "OrbitExplosion";
    case ErrorCode::NonIntegerGenus: return "NonIntegerGenus";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::NotInLattice: return "NotInLattice";
    case ErrorCode::NotDoublyRational: return "NotDoublyRational";
    case ErrorCode::NotPeriodicSkeleton: return "NotPeriodicSkeleton";
    case ErrorCode::UnquantizedMomentum: return "UnquantizedMomentum";
    case ErrorCode::MomentumMismatch: return "MomentumMismatch";
    case ErrorCode::SymmetryNotAutomorphism: return "SymmetryNotAutomorphism";
    case ErrorCode::BadPrescription: return "BadPrescription";
    case ErrorCode::TooCoarse: return "TooCoarse";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::OutOfRange: return "OutOfRange";
  }
  return "Unknown";
}

}  // namespace billiards

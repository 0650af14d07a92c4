#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace billiards {

enum class ErrorCode {
  InvalidInput,
  ClosureViolation,
  SelfIntersection,
  AngleSumMismatch,
  SingularSystem,
  NonpositiveLength,
  CannotBalance,
  ArithmeticOverflow,
  OrbitExplosion,
  NonIntegerGenus,
  RankMismatch,
  DegeneratePair,
  NotInLattice,
  NotDoublyRational,
  NotPeriodicSkeleton,
  UnquantizedMomentum,
  MomentumMismatch,
  SymmetryNotAutomorphism,
  BadPrescription,
  TooCoarse,
  ConvergenceFailure,
  OutOfRange,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace billiards

#pragma once

#include <stdexcept>
#include <string>

namespace catbranch {

enum class ErrorCode {
  NegativeMass,
  AsymmetricCoupling,
  NonPositiveWidth,
  IndefinitePotential,
  TooManyParticles,
  DimensionMismatch,
  NoConvergence,
  NegativeEigenvalue,
  NotNormalizable,
  SingularBlock,
  GridTooNarrow,
  BoundaryMassTooLarge,
  ResolutionTooCoarse,
  EmptyInput,
  ParseError,
  ValidationError,
};

const char* error_name(ErrorCode code);

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace catbranch

#include "catbranch/errors.hpp"

namespace catbranch {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::AsymmetricCoupling: return "AsymmetricCoupling";
    case ErrorCode::NonPositiveWidth: return "NonPositiveWidth";
    case ErrorCode::IndefinitePotential: return "IndefinitePotential";
    case ErrorCode::TooManyParticles: return "TooManyParticles";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::NotNormalizable: return "NotNormalizable";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::BoundaryMassTooLarge: return "BoundaryMassTooLarge";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "UnknownError";
}

}  // namespace catbranch

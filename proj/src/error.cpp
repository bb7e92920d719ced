#include "bsakit/error.hpp"

namespace bsakit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DependentSet: return "DependentSet";
    case ErrorCode::InvalidProbabilities: return "InvalidProbabilities";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotEntangled: return "NotEntangled";
    case ErrorCode::PureInput: return "PureInput";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::CertificateFailed: return "CertificateFailed";
    case ErrorCode::Annihilated: return "Annihilated";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

}  // namespace bsakit

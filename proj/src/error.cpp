#include "qiso/error.hpp"

namespace qiso {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DegenerateAtTolerance: return "DegenerateAtTolerance";
    case ErrorKind::NonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorKind::IllConditionedSegment: return "IllConditionedSegment";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::PoleDegenerate: return "PoleDegenerate";
    case ErrorKind::BadResolution: return "BadResolution";
    case ErrorKind::DegenerateSpec: return "DegenerateSpec";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::AreaExceedsSphere: return "AreaExceedsSphere";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SingularAtDiracPoint: return "SingularAtDiracPoint";
    case ErrorKind::NormDrift: return "NormDrift";
    case ErrorKind::NotCyclic: return "NotCyclic";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace qiso

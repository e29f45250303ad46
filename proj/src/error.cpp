#include "signorini/error.hpp"

namespace signorini {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingDirichlet: return "MissingDirichlet";
    case ErrorCode::SignoriniTouchesControl: return "SignoriniTouchesControl";
    case ErrorCode::UncoveredEdge: return "UncoveredEdge";
    case ErrorCode::NonSimplePolygon: return "NonSimplePolygon";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::TangledMesh: return "TangledMesh";
    case ErrorCode::InvalidGrading: return "InvalidGrading";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorCode::SingularityNotExcited: return "SingularityNotExcited";
    case ErrorCode::MissingSolution: return "MissingSolution";
    case ErrorCode::NoExactSolution: return "NoExactSolution";
    case ErrorCode::OutOfSector: return "OutOfSector";
    case ErrorCode::IncompatibleYStar: return "IncompatibleYStar";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace signorini

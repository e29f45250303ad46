#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace signorini {

/// Failure categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorCode {
  // geometry / input
  MissingDirichlet,
  SignoriniTouchesControl,
  UncoveredEdge,
  NonSimplePolygon,
  ParseError,
  // mesh
  DegenerateGeometry,
  TangledMesh,
  InvalidGrading,
  // solver
  NoConvergence,
  CycleDetected,
  // analysis
  InvalidIndex,
  WindowTooNarrow,
  SingularityNotExcited,
  MissingSolution,
  NoExactSolution,
  // conformal / cases
  OutOfSector,
  IncompatibleYStar,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace signorini

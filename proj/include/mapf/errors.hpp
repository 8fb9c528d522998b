#pragma once

#include <stdexcept>
#include <string>

namespace mapf {

enum class ErrorCode {
  EmptyDomain,
  Disconnected,
  HasHole,
  BadCharacter,
  CellNotInDomain,
  InvalidCut,
  BottleneckTooSmall,
  SkeletonInvariantViolation,
  TileNotInSkeleton,
  SourceCollision,
  TargetCollision,
  SwapForbidden,
  NotAdjacent,
  BrokenCycle,
  OverlappingRegions,
  CrossRegionMove,
  LabelsOutsideRegion,
  NotAMatching,
  NotReconfigurable,
  DegenerateRectangle,
  NotHVConvex,
  LabelMismatch,
  ScaleTooSmall,
  TargetMismatch,
  BadParameters,
  IoError,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mapf

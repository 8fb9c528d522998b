#include "mapf/errors.hpp"

namespace mapf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::HasHole: return "HasHole";
    case ErrorCode::BadCharacter: return "BadCharacter";
    case ErrorCode::CellNotInDomain: return "CellNotInDomain";
    case ErrorCode::InvalidCut: return "InvalidCut";
    case ErrorCode::BottleneckTooSmall: return "BottleneckTooSmall";
    case ErrorCode::SkeletonInvariantViolation: return "SkeletonInvariantViolation";
    case ErrorCode::TileNotInSkeleton: return "TileNotInSkeleton";
    case ErrorCode::SourceCollision: return "SourceCollision";
    case ErrorCode::TargetCollision: return "TargetCollision";
    case ErrorCode::SwapForbidden: return "SwapForbidden";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::BrokenCycle: return "BrokenCycle";
    case ErrorCode::OverlappingRegions: return "OverlappingRegions";
    case ErrorCode::CrossRegionMove: return "CrossRegionMove";
    case ErrorCode::LabelsOutsideRegion: return "LabelsOutsideRegion";
    case ErrorCode::NotAMatching: return "NotAMatching";
    case ErrorCode::NotReconfigurable: return "NotReconfigurable";
    case ErrorCode::DegenerateRectangle: return "DegenerateRectangle";
    case ErrorCode::NotHVConvex: return "NotHVConvex";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::ScaleTooSmall: return "ScaleTooSmall";
    case ErrorCode::TargetMismatch: return "TargetMismatch";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace mapf

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapf/geometry.hpp"

namespace mapf {

/// Shape parameters of a simple polyomino.  The bottleneck is the length of
/// the shortest non-trivial cut; when no such cut exists it is the sentinel
/// value area + 1 and the witness is absent.
struct ShapeProfile {
  int bottleneck = 0;
  std::optional<Cut> bottleneck_witness;
  int depth = 0;
  Cell depth_witness{0, 0};
  int scale = 1;
  int scale_offset_x = 0;
  int scale_offset_y = 0;

  bool has_bottleneck(int area) const { return bottleneck <= area; }
};

/// Connected union of grid-aligned lambda x lambda tiles inside the
/// polyomino, lambda = bottleneck / 4 rounded down.  Tiles are identified by
/// their bottom-left corner (a multiple of lambda in each coordinate).
struct Skeleton {
  int lambda = 0;
  std::vector<Cell> tiles;                 // sorted by (x, y)
  std::vector<std::vector<int>> tile_dual; // adjacency lists over tile indices

  int tile_index(Cell anchor) const;
};

struct Watershed {
  Cell tile{0, 0};
  std::vector<Cell> cells;  // sorted by (x, y)

  bool contains(Cell c) const;
};

/// Maximum over all cells of the geodesic distance to the nearest cell that
/// touches the boundary.  Witness is the lexicographically smallest maximizer.
std::pair<int, Cell> compute_depth(const Polyomino& p);

/// Shortest non-trivial cut length, with a witness cut; sentinel area + 1 and
/// no witness when every cut is trivial.
std::pair<int, std::optional<Cut>> compute_bottleneck(const Polyomino& p);

/// Largest c such that some offset in [0,c)^2 tiles the polyomino exactly by
/// aligned c x c squares.  Offset ties break lexicographically.
std::pair<int, std::pair<int, int>> compute_scale(const Polyomino& p);

ShapeProfile compute_shape_profile(const Polyomino& p);

/// Union of all grid-aligned lambda-tiles fully inside the polyomino.
/// Requires bottleneck >= 8; verifies connectivity and the covering property
/// (every 2lambda square inside P contains a tile) after construction.
Skeleton compute_skeleton(const Polyomino& p);
Skeleton compute_skeleton(const Polyomino& p, int bottleneck);

/// Union of all 2lambda x 2lambda squares in P that fully contain the tile.
Watershed compute_watershed(const Polyomino& p, const Skeleton& s, Cell tile);

/// Bottom-left corners of all placements of a 2lambda x 2lambda square fully
/// inside P (any position).  Verifies that the placements form a connected
/// set under unit translation.
std::vector<Cell> square_cover_2lambda(const Polyomino& p);
std::vector<Cell> square_cover_2lambda(const Polyomino& p, int bottleneck);

std::string shape_profile_to_text(const ShapeProfile& profile);

}  // namespace mapf

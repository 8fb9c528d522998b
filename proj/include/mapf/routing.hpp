#pragma once

#include <optional>
#include <vector>

#include "mapf/primitives.hpp"
#include "mapf/schedule.hpp"
#include "mapf/shape.hpp"

namespace mapf {

/// A sequence of swap rounds; each round is a set of pairwise non-incident
/// dual edges whose endpoints exchange their tokens.
struct MatchingSequence {
  std::vector<std::vector<DualEdge>> rounds;
};

/// Applies a matching round to a configuration (pure swaps, no collision
/// semantics; used for replay checks and compilation).
Configuration apply_matching(const Polyomino& p, const Configuration& c,
                             const std::vector<DualEdge>& round);

/// Permutation routing on a spanning tree of (a sub-structure of) the dual
/// graph.  Vertices are cell indices of p; tree_edges must form a spanning
/// tree of them.  Produces at most about 3n rounds (odd-even transposition
/// on paths, centroid splitting in general).
MatchingSequence tree_route(const Polyomino& p, const std::vector<DualEdge>& tree_edges,
                            const Configuration& source, const Configuration& target);

/// Compiles a matching sequence into a schedule via realize_matching.
Schedule compile_matching_sequence(const Polyomino& p, const SquareCover& cover,
                                   const MatchingSequence& seq);

struct BfsRegion {
  std::vector<int> region;                       // cell indices, sorted
  std::vector<std::vector<int>> components;      // complement components
  std::vector<std::vector<DualEdge>> wavelets;   // separating dual-edge sets
};

/// All cells within geodesic distance r of v, the connected components of
/// the complement, and the dual-edge cut (wavelet) separating each one.
BfsRegion bfs_region(const Polyomino& q, Cell v, int r);

/// Cells admitting a geodesic path of length <= k that crosses the cut.
std::vector<int> cut_expansion(const Polyomino& p, const Cut& c, int k);

struct PatchTree {
  struct Node {
    std::vector<int> patch;          // cell indices, sorted
    int parent = -1;
    std::vector<int> children;
    std::vector<DualEdge> cut;       // separates this node's region from the parent
    std::vector<int> region_f;       // patch plus children patches, sorted
    int depth = 0;
  };
  std::vector<Node> nodes;  // node 0 is the root
};

/// BFS-annulus decomposition of the polyomino into patches, following the
/// quotient structure (unit cells when step == 1, or coarser tiles).
PatchTree build_patch_tree(const Polyomino& p, int delta);

struct GroupAssignment {
  Skeleton skeleton;
  std::vector<int> group_of;                  // cell index -> tile index
  std::vector<std::vector<int>> group_cells;  // tile index -> cell indices
};

/// Partitions all cells into per-tile groups: tile cells stay with their
/// tile, every other cell joins the lexicographically smallest tile whose
/// watershed contains it.
GroupAssignment group_by_watershed(const Polyomino& p, const Skeleton& s);

struct GroupRouteResult {
  Schedule schedule;
  int rounds = 0;
};

/// Greedy congestion sweep over a fixed 4-matching cover of the skeleton
/// tile graph; matched groups exchange agents by reconfiguring the union of
/// their regions.  Fails (Internal) if the round cap 8n/lambda^2 is hit.
GroupRouteResult group_route(const Polyomino& p, const GroupAssignment& groups,
                             const Instance& inst);

/// Same sweep over the exact tiling of a scale-c polyomino by aligned c x c
/// tiles; matched tiles form a c x 2c rectangle and are sorted directly.
GroupRouteResult route_scaled_tiles(const Polyomino& p, int c, const Instance& inst);

/// Routes a permutation on an arbitrary connected subpolyomino: rectangles
/// and HV-convex pieces use interval routing, everything else spanning-tree
/// routing.  Schedule is confined to the region.
Schedule reorder_region(const Polyomino& region, const Configuration& c,
                        const Configuration& target);

}  // namespace mapf

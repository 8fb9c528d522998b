#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mapf/geometry.hpp"
#include "mapf/schedule.hpp"

namespace mapf {

/// All 2x2 squares inside a polyomino (by bottom-left corner) and their
/// overlap graph.
struct SquareCover {
  std::vector<Cell> squares;  // sorted by (x, y)
  std::vector<std::vector<int>> intersection_graph;

  int square_index(Cell anchor) const;
};

struct ReconfigurabilityWitness {
  enum class Kind {
    UncoveredCell,   // no 2x2 square contains this cell
    EdgeWithoutSquare,  // adjacent cells sharing no square (covers cut edges)
    LoneSquare,      // a single 2x2 square admits only rotations
  };
  Kind kind = Kind::UncoveredCell;
  Cell cell{0, 0};
  DualEdge edge;
};

struct ReconfigurabilityResult {
  bool reconfigurable = false;
  SquareCover cover;  // meaningful when reconfigurable
  std::optional<ReconfigurabilityWitness> witness;
};

/// Decides universal reconfigurability via the square-cover criterion.
/// Single cells are trivially reconfigurable; a domain that is exactly one
/// 2x2 square is not (only rotations are possible).
ReconfigurabilityResult check_universal_reconfigurability(const Polyomino& p);

/// Union of two overlapping 2x2 squares: either a 2x3/3x2 block (overlap 2)
/// or a 7-cell staircase (overlap 1).
struct GadgetRegion {
  Polyomino cells = Polyomino::from_cells({{0, 0}});
  Cell square_a{0, 0};
  Cell square_b{0, 0};
  bool overlap_two = false;
};

GadgetRegion make_gadget_region(Cell square_a, Cell square_b);

/// Schedule confined to the region that exchanges the two labels and
/// restores every other agent.  Makespan <= 7 (overlap 2) or <= 14.
Schedule gadget_swap(const GadgetRegion& region, const Configuration& c,
                     std::pair<int, int> labels);

/// Schedule realizing an arbitrary relabeling of the region: the agent at
/// cell i ends at cell perm[i].  Used for batched swaps in one region.
Schedule gadget_permutation(const GadgetRegion& region, const std::vector<int>& perm);

/// Realizes all swaps of a dual-graph matching in constant makespan, by
/// batching gadget regions into at most 36 mutually disjoint classes.
Schedule realize_matching(const Polyomino& p, const SquareCover& cover,
                          const std::vector<DualEdge>& matching);

/// Permutation routing on a rectangle (w, h >= 2) by column/row/column
/// interval routing compiled through realize_matching.
Schedule sort_rectangle(const Polyomino& rect, const Configuration& c,
                        const Configuration& target);

/// Permutation routing on a connected HV-convex piece.  Uses the same
/// three-phase interval routing; falls back to spanning-tree routing when
/// the row-assignment step is infeasible.
Schedule route_convex_piece(const Polyomino& piece, const Configuration& c,
                            const Configuration& target);

bool is_hv_convex(const Polyomino& p);

}  // namespace mapf

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mapf/errors.hpp"

namespace mapf {

/// A unit cell of the integer grid; y grows upward.
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(Cell a, Cell b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(Cell a, Cell b) { return !(a == b); }
  friend bool operator<(Cell a, Cell b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  }
};

/// A lattice point (corner of cells).
struct Vertex {
  int x = 0;
  int y = 0;

  friend bool operator==(Vertex a, Vertex b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(Vertex a, Vertex b) { return !(a == b); }
  friend bool operator<(Vertex a, Vertex b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  }
};

/// Dual-graph edge between two adjacent cells, stored by cell index (lo < hi).
struct DualEdge {
  int a = -1;
  int b = -1;

  friend bool operator==(DualEdge e, DualEdge f) { return e.a == f.a && e.b == f.b; }
  friend bool operator<(DualEdge e, DualEdge f) {
    return e.a != f.a ? e.a < f.a : e.b < f.b;
  }
};

/// A cut: simple lattice path between two boundary vertices through the
/// interior.  cut_edges are the dual edges crossed by the path.
struct Cut {
  std::vector<Vertex> path;
  std::vector<DualEdge> cut_edges;
  int length = 0;  // number of lattice edges on the path
};

/// A simply connected, 4-connected set of unit cells.  Immutable after
/// construction; all operations are pure.
class Polyomino {
 public:
  /// Builds from an explicit cell set and verifies the invariants
  /// (nonempty, connected, hole-free).  Coordinates are kept as given.
  static Polyomino from_cells(std::vector<Cell> cells);

  /// Parses the ASCII map format: '#' cell, '.' empty, rows top to bottom
  /// (first row has the largest y).  Output is normalized so the bounding
  /// box minimum is (0,0).
  static Polyomino parse(std::string_view text);

  /// Emits the same ASCII format, rows top to bottom.
  std::string serialize() const;

  /// Copy with coordinates shifted so the bounding-box minimum is (0,0).
  Polyomino normalized() const;

  int area() const { return static_cast<int>(cells_.size()); }
  const std::vector<Cell>& cells() const { return cells_; }
  Cell cell(int index) const { return cells_[index]; }

  int min_x() const { return min_x_; }
  int min_y() const { return min_y_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool contains(Cell c) const;
  /// Index into cells(), or -1.
  int index_of(Cell c) const;

  /// Indices of the 4-neighbors of cells_[index] that are in the polyomino.
  void neighbors(int index, int out[4], int& count) const;
  std::vector<DualEdge> dual_edges() const;
  int interior_edge_count() const;

  /// BFS distances (in the dual graph) from a set of source cell indices.
  /// Unreachable cells get -1 (cannot happen for a connected polyomino).
  std::vector<int> bfs_distances(const std::vector<int>& sources) const;

  int geodesic_distance(Cell a, Cell b) const;

  /// The outer boundary cycle, counterclockwise, starting at the
  /// lexicographically smallest boundary vertex.  The first vertex is not
  /// repeated at the end; the cycle length equals the perimeter.
  const std::vector<Vertex>& boundary_cycle() const;

  int perimeter() const { return static_cast<int>(boundary_cycle().size()); }

  /// True if v lies on the outer boundary cycle.
  bool is_boundary_vertex(Vertex v) const;
  /// True if the cell has at least one boundary edge.
  bool is_boundary_cell(int index) const;

  /// True for lattice edge {v,w} (adjacent vertices) with both incident
  /// cells inside the polyomino.
  bool is_interior_lattice_edge(Vertex v, Vertex w) const;

  /// The dual edge crossed by interior lattice edge {v,w}.
  DualEdge crossed_dual_edge(Vertex v, Vertex w) const;

  /// Validates a cut path against all Cut invariants and fills in
  /// cut_edges/length.  Throws Error(InvalidCut) on violation.
  Cut make_cut(std::vector<Vertex> path) const;

  /// Length of the shorter boundary arc between two boundary vertices.
  int shorter_boundary_arc(Vertex a, Vertex b) const;

  bool is_trivial_cut(const Cut& c) const;

  /// Splits along a cut into the two induced subpolyominoes.  The piece
  /// containing the lexicographically smallest cell comes first.
  std::pair<Polyomino, Polyomino> split(const Cut& c) const;

 private:
  Polyomino() = default;
  void build_index();

  std::vector<Cell> cells_;            // sorted
  std::vector<int32_t> grid_;          // (width*height) occupancy -> index or -1
  int min_x_ = 0, min_y_ = 0;
  int width_ = 0, height_ = 0;
  mutable std::vector<Vertex> boundary_;  // lazy
  mutable std::vector<uint8_t> boundary_vertex_mask_;  // lazy, (w+1)*(h+1)
};

}  // namespace mapf

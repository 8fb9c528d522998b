#pragma once

#include <string>
#include <vector>

#include "mapf/geometry.hpp"

namespace mapf {

/// Bijection between the cells of a polyomino and agent labels 1..n.
/// Stored by cell index: labels_[i] is the label occupying cells()[i].
class Configuration {
 public:
  Configuration() = default;
  /// Identity configuration: cell i holds label i+1.
  static Configuration identity(const Polyomino& p);
  /// Builds from per-cell-index labels and verifies the permutation.
  static Configuration from_labels(std::vector<int> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  int label_at(int cell_index) const { return labels_[cell_index]; }
  /// Cell index currently holding the given label.
  int cell_of(int label) const { return positions_[label - 1]; }
  const std::vector<int>& labels() const { return labels_; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const Configuration& a, const Configuration& b) {
    return !(a == b);
  }

 private:
  std::vector<int> labels_;
  std::vector<int> positions_;
};

struct Move {
  Cell from;
  Cell to;

  bool is_hold() const { return from == to; }
  friend bool operator==(Move a, Move b) { return a.from == b.from && a.to == b.to; }
};

/// A parallel set of collision-free moves; holds are implicit.
struct Transformation {
  std::vector<Move> moves;
};

struct Schedule {
  std::vector<Transformation> steps;

  int makespan() const { return static_cast<int>(steps.size()); }
};

struct Instance {
  Polyomino polyomino;
  Configuration start;
  Configuration target;
};

struct ValidationReport {
  bool valid = false;
  int failing_step = -1;      // -1 when no step fails
  std::string reason;         // empty when valid
  int makespan = 0;
  int diameter = 0;
  double stretch = 0.0;       // makespan/diameter; makespan itself when d = 0
};

/// Applies one transformation, enforcing all its invariants (distinct
/// sources/targets, adjacency, no 2-swaps, cycle decomposition).
Configuration apply_transformation(const Polyomino& p, const Configuration& c,
                                   const Transformation& t);

/// Replays a schedule against the instance; never throws, errors become
/// report entries.
ValidationReport validate_schedule(const Instance& inst, const Schedule& s);

/// Maximum start-to-target geodesic distance over all agents.
int diameter(const Instance& inst);

Schedule concat(Schedule a, const Schedule& b);

/// Zips schedules acting on pairwise disjoint cell-index regions into one,
/// padding shorter parts with holds.  Region = set of cell indices.
Schedule merge_parallel(const std::vector<std::pair<std::vector<int>, Schedule>>& parts,
                        const Polyomino& p);

/// Drops trailing/empty structure: removes explicit hold moves and empty steps.
Schedule compact(Schedule s);

// --- External formats ---

/// Schedule text: line 1 "makespan M"; per step "t <index>:" then
/// "x,y->x',y'" tokens joined by ';' (holds omitted).
std::string schedule_to_text(const Schedule& s);
Schedule schedule_from_text(const std::string& text);

/// Instance JSON: {"map":[rows],"start":[rows],"target":[rows]}, 0 = empty.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& json_text);

}  // namespace mapf

#pragma once

#include <optional>
#include <string>

#include "mapf/routing.hpp"
#include "mapf/schedule.hpp"
#include "mapf/shape.hpp"

namespace mapf {

enum class Algorithm { Any, Scaled, Bottleneck, Narrow };

const char* algorithm_name(Algorithm a);

struct PlanResult {
  Schedule schedule;
  Algorithm algorithm = Algorithm::Any;
  int makespan = 0;
  int diameter = 0;
  int lower_bound = 0;
  double stretch_vs_lb = 0.0;
};

/// Works on any reconfigurable instance: routes on a BFS spanning tree of the
/// dual graph rooted at the smallest cell.  Makespan O(n).
PlanResult plan_any(const Instance& inst);

/// Requires scale >= 3: sweeps agents between the c x c tiles of the exact
/// tiling, sorting matched tile pairs as rectangles.
PlanResult plan_scaled(const Instance& inst);

/// Requires bottleneck >= 8: skeleton tiles and their watersheds form the
/// groups for the congestion sweep.
PlanResult plan_bottleneck(const Instance& inst);

/// Requires bottleneck >= 8: patch-tree decomposition with radius tied to the
/// instance diameter; agents cross at most one patch boundary, handled in
/// alternating parity phases, then each patch is sorted locally.
PlanResult plan_narrow(const Instance& inst);

/// Exact optimum by breadth-first search over the configuration graph.
/// Returns nothing if the number of explored configurations would exceed
/// the limit.
std::optional<int> oracle_optimal(const Instance& inst, long long limit);

/// max(diameter, max over enumerated non-trivial cuts of
/// ceil(crossings / (2 * length))).
int lower_bound(const Instance& inst);

/// Dispatch: narrow if bottleneck >= 8, scaled if scale >= 3, otherwise any.
/// With race set, runs every applicable planner and keeps the smallest
/// makespan (ties break in enum order).
PlanResult auto_plan(const Instance& inst, bool race = false);

/// Metrics sidecar: {"algorithm", "makespan", "diameter", "lower_bound",
/// "stretch_vs_lb"}.
std::string plan_result_to_json(const PlanResult& r);

}  // namespace mapf

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mapf/planners.hpp"
#include "mapf/schedule.hpp"

namespace mapf {

/// Two side x side chambers joined by a corridor_width-wide,
/// corridor_len-long corridor.  Start/target is the full mirror exchange of
/// the chamber contents; corridor agents stay put.
Instance gen_dumbbell(int side, int corridor_width, int corridor_len);

/// Random simple polyomino grown by hole-free accretion; deterministic per
/// seed.
Polyomino gen_random_simple(int n, uint64_t seed);

/// Uniformly random permutation instance on p; deterministic per seed.
Instance gen_random_instance(const Polyomino& p, uint64_t seed);

/// Each template cell becomes a c x c block, so the result has scale >= c.
Polyomino gen_scaled(const Polyomino& tmpl, int c);

/// Writes frame_0000.svg .. frame_<makespan>.svg into out_dir: the start
/// configuration plus one frame per step, with the agents that just moved
/// highlighted.
void render_svg(const Instance& inst, const Schedule& s, const std::string& out_dir);

struct BenchRecord {
  std::string instance_id;
  int n = 0;
  int d = 0;
  int bottleneck = 0;
  int depth = 0;
  int scale = 0;
  std::string algorithm;
  int makespan = 0;
  int lower_bound = 0;
  double stretch_vs_lb = 0.0;
  double wall_time = 0.0;  // seconds
};

/// Runs one of the suites {std, dumbbell-scaling, corridor-scaling, random},
/// writes the records as CSV (header + one row per instance/algorithm pair,
/// sorted by instance id), and returns them.
std::vector<BenchRecord> bench(const std::string& suite, const std::string& csv_path);

}  // namespace mapf

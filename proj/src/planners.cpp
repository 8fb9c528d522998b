#include "mapf/planners.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <set>

#include <json.hpp>

#include "mapf/primitives.hpp"

namespace mapf {

namespace {

PlanResult finish(Schedule s, Algorithm algo, const Instance& inst) {
  PlanResult r;
  r.schedule = compact(std::move(s));
  r.algorithm = algo;
  r.makespan = r.schedule.makespan();
  r.diameter = diameter(inst);
  r.lower_bound = lower_bound(inst);
  r.stretch_vs_lb = r.lower_bound > 0
                        ? static_cast<double>(r.makespan) / r.lower_bound
                        : static_cast<double>(r.makespan);
  return r;
}

// Reorders agents inside a sub-region: the agent at region cell i ends at
// region cell perm[i].
Schedule reorder_cells(const Polyomino& p, const std::vector<int>& region,
                       const std::vector<int>& perm) {
  bool identity = true;
  for (size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) identity = false;
  if (identity) return {};

  std::vector<Cell> cells;
  for (int i : region) cells.push_back(p.cell(i));
  Polyomino sub = Polyomino::from_cells(cells);
  std::vector<int> target_labels(perm.size());
  for (size_t i = 0; i < perm.size(); ++i)
    target_labels[perm[i]] = static_cast<int>(i) + 1;
  return reorder_region(sub, Configuration::identity(sub),
                        Configuration::from_labels(std::move(target_labels)));
}

Schedule bottleneck_schedule(const Instance& inst) {
  const Polyomino& p = inst.polyomino;
  Skeleton s = compute_skeleton(p);
  GroupAssignment groups = group_by_watershed(p, s);
  return group_route(p, groups, inst).schedule;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Any: return "any";
    case Algorithm::Scaled: return "scaled";
    case Algorithm::Bottleneck: return "bottleneck";
    case Algorithm::Narrow: return "narrow";
  }
  return "any";
}

PlanResult plan_any(const Instance& inst) {
  const Polyomino& p = inst.polyomino;
  ReconfigurabilityResult rec = check_universal_reconfigurability(p);
  if (!rec.reconfigurable && p.area() > 1)
    throw Error(ErrorCode::NotReconfigurable, "domain is not reconfigurable");
  if (inst.start == inst.target) return finish({}, Algorithm::Any, inst);

  // BFS spanning tree of the dual graph, rooted at the smallest cell.
  std::vector<DualEdge> tree;
  std::vector<char> seen(p.area(), 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop();
    int nbr[4], cnt;
    p.neighbors(i, nbr, cnt);
    for (int j = 0; j < cnt; ++j)
      if (!seen[nbr[j]]) {
        seen[nbr[j]] = 1;
        tree.push_back({std::min(i, nbr[j]), std::max(i, nbr[j])});
        queue.push(nbr[j]);
      }
  }
  MatchingSequence seq = tree_route(p, tree, inst.start, inst.target);
  return finish(compile_matching_sequence(p, rec.cover, seq), Algorithm::Any, inst);
}

PlanResult plan_scaled(const Instance& inst) {
  const Polyomino& p = inst.polyomino;
  ShapeProfile profile = compute_shape_profile(p);
  if (profile.scale < 3)
    throw Error(ErrorCode::ScaleTooSmall, "scaled planner needs scale >= 3");
  return finish(route_scaled_tiles(p, profile.scale, inst).schedule,
                Algorithm::Scaled, inst);
}

PlanResult plan_bottleneck(const Instance& inst) {
  const Polyomino& p = inst.polyomino;
  ShapeProfile profile = compute_shape_profile(p);
  if (profile.bottleneck < 8)
    throw Error(ErrorCode::BottleneckTooSmall, "bottleneck planner needs zeta >= 8");
  ReconfigurabilityResult rec = check_universal_reconfigurability(p);
  if (!rec.reconfigurable)
    throw Error(ErrorCode::NotReconfigurable, "domain is not reconfigurable");
  return finish(bottleneck_schedule(inst), Algorithm::Bottleneck, inst);
}

PlanResult plan_narrow(const Instance& inst) {
  const Polyomino& p = inst.polyomino;
  ShapeProfile profile = compute_shape_profile(p);
  if (profile.bottleneck < 8)
    throw Error(ErrorCode::BottleneckTooSmall, "narrow planner needs zeta >= 8");
  ReconfigurabilityResult rec = check_universal_reconfigurability(p);
  if (!rec.reconfigurable)
    throw Error(ErrorCode::NotReconfigurable, "domain is not reconfigurable");

  const int d = diameter(inst);
  if (d == 0) return finish({}, Algorithm::Narrow, inst);

  // Patches are BFS annuli of thickness 3d, so every agent's target patch is
  // its own patch or an adjacent one, and each agent crosses at most one
  // patch boundary.
  PatchTree pt = build_patch_tree(p, 3 * d);
  if (pt.nodes.size() == 1)
    return finish(bottleneck_schedule(inst), Algorithm::Narrow, inst);

  const int num_nodes = static_cast<int>(pt.nodes.size());
  std::vector<int> patch_of(p.area(), -1);
  for (int q = 0; q < num_nodes; ++q)
    for (int i : pt.nodes[q].patch) patch_of[i] = q;

  std::vector<int> labels(p.area());
  for (int i = 0; i < p.area(); ++i) labels[i] = inst.start.label_at(i);

  // Connected components of each F-region, computed once.
  std::vector<std::vector<std::vector<int>>> f_comps(num_nodes);
  for (int q = 0; q < num_nodes; ++q) {
    std::set<int> pending(pt.nodes[q].region_f.begin(), pt.nodes[q].region_f.end());
    while (!pending.empty()) {
      std::vector<int> comp{*pending.begin()};
      pending.erase(pending.begin());
      for (size_t k = 0; k < comp.size(); ++k) {
        int nbr[4], cnt;
        p.neighbors(comp[k], nbr, cnt);
        for (int j = 0; j < cnt; ++j)
          if (pending.erase(nbr[j])) comp.push_back(nbr[j]);
      }
      std::sort(comp.begin(), comp.end());
      f_comps[q].push_back(std::move(comp));
    }
  }

  // Destination assignment for one component: exact targets first, then
  // patch-level pools (wanted child patch, own patch, any remaining cell).
  auto component_jobs = [&](int q, const std::vector<int>& comp) {
    std::vector<int> index_in(p.area(), -1);
    for (size_t i = 0; i < comp.size(); ++i) index_in[comp[i]] = static_cast<int>(i);
    std::set<int> children(pt.nodes[q].children.begin(), pt.nodes[q].children.end());

    std::vector<int> dest(comp.size(), -1);
    std::vector<char> claimed(comp.size(), 0);
    std::vector<int> rest;
    for (size_t i = 0; i < comp.size(); ++i) {
      int tc = inst.target.cell_of(labels[comp[i]]);
      if (index_in[tc] >= 0 && !claimed[index_in[tc]]) {
        dest[i] = index_in[tc];
        claimed[index_in[tc]] = 1;
      } else {
        rest.push_back(static_cast<int>(i));
      }
    }
    // Agents that only need to stay in their patch keep their cell when it is
    // still free, so untouched components stay put.
    std::vector<int> moving;
    for (int i : rest) {
      int tp = patch_of[inst.target.cell_of(labels[comp[i]])];
      int want = (children.count(tp) || tp == q) ? tp : patch_of[comp[i]];
      if (want == patch_of[comp[i]] && !claimed[i]) {
        dest[i] = i;
        claimed[i] = 1;
      } else {
        moving.push_back(i);
      }
    }
    rest = std::move(moving);
    std::map<int, std::vector<int>> pool;  // patch node -> free slots, reversed
    for (size_t i = comp.size(); i-- > 0;)
      if (!claimed[i]) pool[patch_of[comp[i]]].push_back(static_cast<int>(i));

    auto take = [&](int node) {
      auto it = pool.find(node);
      if (it == pool.end() || it->second.empty()) return -1;
      int slot = it->second.back();
      it->second.pop_back();
      return slot;
    };
    std::vector<int> deferred;
    for (int i : rest) {
      int tp = patch_of[inst.target.cell_of(labels[comp[i]])];
      int want = (children.count(tp) || tp == q) ? tp : patch_of[comp[i]];
      int slot = take(want);
      if (slot >= 0)
        dest[i] = slot;
      else
        deferred.push_back(i);
    }
    for (int i : deferred) {
      int slot = take(patch_of[comp[i]]);
      if (slot < 0)
        for (auto& [node, slots] : pool)
          if (!slots.empty()) {
            slot = slots.back();
            slots.pop_back();
            break;
          }
      dest[i] = slot;
    }

    // Shrink to the cells that actually move, connected through the
    // component, so the reorder cost tracks the displaced block rather than
    // the whole band.
    std::set<int> region_set;
    for (size_t i = 0; i < comp.size(); ++i)
      if (dest[i] != static_cast<int>(i)) region_set.insert(comp[i]);
    if (region_set.empty()) return std::make_pair(std::vector<int>{}, Schedule{});
    while (true) {
      // BFS inside the component from one piece of the region to the next.
      std::map<int, int> prev;
      std::queue<int> bfs;
      int seed_cell = *region_set.begin();
      std::set<int> piece{seed_cell};
      std::vector<int> grow{seed_cell};
      for (size_t k = 0; k < grow.size(); ++k) {
        int nbr[4], cnt;
        p.neighbors(grow[k], nbr, cnt);
        for (int j = 0; j < cnt; ++j)
          if (region_set.count(nbr[j]) && piece.insert(nbr[j]).second)
            grow.push_back(nbr[j]);
      }
      if (piece.size() == region_set.size()) break;
      for (int c : piece) {
        bfs.push(c);
        prev[c] = c;
      }
      int hit = -1;
      while (!bfs.empty() && hit < 0) {
        int u = bfs.front();
        bfs.pop();
        int nbr[4], cnt;
        p.neighbors(u, nbr, cnt);
        for (int j = 0; j < cnt; ++j) {
          int v = nbr[j];
          if (index_in[v] < 0 || prev.count(v)) continue;
          prev[v] = u;
          if (region_set.count(v)) {
            hit = v;
            break;
          }
          bfs.push(v);
        }
      }
      if (hit < 0) return std::make_pair(std::vector<int>{}, Schedule{});
      for (int c = hit; prev[c] != c; c = prev[c]) region_set.insert(c);
    }
    std::vector<int> region(region_set.begin(), region_set.end());
    std::vector<int> index_in_region(p.area(), -1);
    for (size_t i = 0; i < region.size(); ++i) index_in_region[region[i]] = static_cast<int>(i);
    std::vector<int> perm(region.size());
    for (size_t i = 0; i < region.size(); ++i) perm[i] = static_cast<int>(i);
    for (size_t i = 0; i < comp.size(); ++i)
      if (dest[i] != static_cast<int>(i))
        perm[index_in_region[comp[i]]] = index_in_region[comp[dest[i]]];

    Schedule job;
    try {
      job = reorder_cells(p, region, perm);
    } catch (const Error&) {
      // Sliver region that cannot be reordered (too thin, or it encloses
      // deeper cells); leave it to the fallback pass.
      return std::make_pair(std::vector<int>{}, Schedule{});
    }
    std::vector<int> new_labels(comp.size());
    for (size_t i = 0; i < comp.size(); ++i) new_labels[dest[i]] = labels[comp[i]];
    for (size_t i = 0; i < comp.size(); ++i) labels[comp[i]] = new_labels[i];
    return std::make_pair(std::move(region), std::move(job));
  };

  Schedule schedule;
  auto done = [&]() {
    for (int i = 0; i < p.area(); ++i)
      if (inst.target.cell_of(labels[i]) != i) return false;
    return true;
  };
  for (int iter = 0; iter < 3 && !done(); ++iter) {
    for (int parity = 0; parity < 2; ++parity) {
      std::vector<std::pair<std::vector<int>, Schedule>> jobs;
      for (int q = 0; q < num_nodes; ++q) {
        if (pt.nodes[q].depth % 2 != parity) continue;
        for (const std::vector<int>& comp : f_comps[q]) {
          auto [region, job] = component_jobs(q, comp);
          if (job.makespan() > 0) jobs.emplace_back(std::move(region), std::move(job));
        }
      }
      if (!jobs.empty())
        schedule = concat(std::move(schedule), merge_parallel(jobs, p));
    }
  }

  if (!done()) {
    // The parity phases did not settle (components split a patch, or pools
    // overflowed); route the remaining permutation over the skeleton.
    Instance rest{p, Configuration::from_labels(labels), inst.target};
    schedule = concat(std::move(schedule), bottleneck_schedule(rest));
  }
  return finish(std::move(schedule), Algorithm::Narrow, inst);
}

std::optional<int> oracle_optimal(const Instance& inst, long long limit) {
  const Polyomino& p = inst.polyomino;
  const int n = p.area();
  if (n > 12) return std::nullopt;
  if (inst.start == inst.target) return 0;

  // All simple cycles in the dual graph, deduplicated by smallest start
  // vertex and direction.
  std::vector<std::vector<int>> cycles;
  std::vector<int> path;
  std::vector<char> on_path(n, 0);
  std::function<void(int, int)> dfs = [&](int s, int u) {
    int nbr[4], cnt;
    p.neighbors(u, nbr, cnt);
    for (int j = 0; j < cnt; ++j) {
      int v = nbr[j];
      if (v == s && path.size() >= 4 && path[1] < path.back()) cycles.push_back(path);
      if (v <= s || on_path[v]) continue;
      on_path[v] = 1;
      path.push_back(v);
      dfs(s, v);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    std::fill(on_path.begin(), on_path.end(), 0);
    on_path[s] = 1;
    dfs(s, s);
  }

  // Oriented cycles as successor maps plus their cell masks.
  struct Rotation {
    std::vector<int> next;
    uint32_t mask = 0;
  };
  std::vector<Rotation> singles;
  for (const auto& cyc : cycles)
    for (int dir = 0; dir < 2; ++dir) {
      Rotation m;
      m.next.resize(n);
      for (int i = 0; i < n; ++i) m.next[i] = i;
      int k = static_cast<int>(cyc.size());
      for (int i = 0; i < k; ++i) {
        int from = cyc[i], to = cyc[dir == 0 ? (i + 1) % k : (i + k - 1) % k];
        m.next[from] = to;
        m.mask |= 1u << from;
      }
      singles.push_back(std::move(m));
    }

  // Every set of pairwise disjoint oriented cycles is one transformation.
  std::vector<Rotation> transforms;
  std::function<void(size_t, const Rotation&)> combine = [&](size_t from,
                                                             const Rotation& acc) {
    for (size_t j = from; j < singles.size(); ++j) {
      if (acc.mask & singles[j].mask) continue;
      Rotation merged = acc;
      merged.mask |= singles[j].mask;
      for (int i = 0; i < n; ++i)
        if (singles[j].next[i] != i) merged.next[i] = singles[j].next[i];
      transforms.push_back(merged);
      combine(j + 1, merged);
    }
  };
  Rotation id;
  id.next.resize(n);
  for (int i = 0; i < n; ++i) id.next[i] = i;
  combine(0, id);

  std::map<std::vector<int>, int> dist;
  std::queue<std::vector<int>> frontier;
  dist[inst.start.labels()] = 0;
  frontier.push(inst.start.labels());
  const std::vector<int>& goal = inst.target.labels();
  long long explored = 1;
  while (!frontier.empty()) {
    std::vector<int> cur = std::move(frontier.front());
    frontier.pop();
    int dc = dist[cur];
    for (const Rotation& m : transforms) {
      std::vector<int> nxt(n);
      for (int i = 0; i < n; ++i) nxt[m.next[i]] = cur[i];
      if (dist.count(nxt)) continue;
      if (nxt == goal) return dc + 1;
      if (++explored > limit) return std::nullopt;
      dist[nxt] = dc + 1;
      frontier.push(std::move(nxt));
    }
  }
  return std::nullopt;  // disconnected configuration graph
}

int lower_bound(const Instance& inst) {
  const Polyomino& p = inst.polyomino;
  int best = diameter(inst);
  auto [zeta, witness] = compute_bottleneck(p);
  if (!witness) return best;
  const int cap = zeta + 2;

  auto evaluate = [&](const std::vector<Vertex>& vertices) {
    Cut cut;
    try {
      cut = p.make_cut(vertices);
    } catch (const Error&) {
      return;
    }
    if (p.is_trivial_cut(cut)) return;
    auto [side_a, side_b] = p.split(cut);
    std::vector<char> in_a(p.area(), 0);
    for (const Cell& c : side_a.cells()) in_a[p.index_of(c)] = 1;
    int crossings = 0;
    for (int l = 1; l <= p.area(); ++l)
      if (in_a[inst.start.cell_of(l)] != in_a[inst.target.cell_of(l)]) ++crossings;
    best = std::max(best, (crossings + 2 * cut.length - 1) / (2 * cut.length));
  };

  // Distance from each lattice vertex back to the boundary through interior
  // lattice edges, to prune paths that cannot close within the cap.
  std::map<Vertex, int> to_boundary;
  std::queue<Vertex> bq;
  for (const Vertex& v : p.boundary_cycle()) {
    to_boundary[v] = 0;
    bq.push(v);
  }
  while (!bq.empty()) {
    Vertex u = bq.front();
    bq.pop();
    for (Vertex w : {Vertex{u.x + 1, u.y}, Vertex{u.x - 1, u.y},
                     Vertex{u.x, u.y + 1}, Vertex{u.x, u.y - 1}}) {
      if (!p.is_interior_lattice_edge(u, w) || to_boundary.count(w)) continue;
      to_boundary[w] = to_boundary[u] + 1;
      bq.push(w);
    }
  }

  // A start vertex is only useful if some boundary partner lies within the
  // cap but has a longer boundary arc; otherwise every cut from it within
  // the cap is trivial.
  const std::vector<Vertex>& cycle = p.boundary_cycle();
  const int perim = static_cast<int>(cycle.size());
  auto useful_start = [&](int idx) {
    for (int j = 0; j < perim; ++j) {
      if (j == idx) continue;
      int manhattan = std::abs(cycle[idx].x - cycle[j].x) + std::abs(cycle[idx].y - cycle[j].y);
      int arc = std::min(std::abs(idx - j), perim - std::abs(idx - j));
      if (manhattan <= cap && arc > manhattan) return true;
    }
    return false;
  };

  // Bounded DFS over interior lattice paths between boundary vertices.
  for (int idx = 0; idx < perim; ++idx) {
    if (!useful_start(idx)) continue;
    const Vertex& v0 = cycle[idx];
    long long budget = 4000;
    std::vector<Vertex> vpath{v0};
    std::set<Vertex> on;
    on.insert(v0);
    std::function<void(Vertex)> extend = [&](Vertex u) {
      if (--budget < 0) return;
      for (Vertex w : {Vertex{u.x + 1, u.y}, Vertex{u.x - 1, u.y},
                       Vertex{u.x, u.y + 1}, Vertex{u.x, u.y - 1}}) {
        if (on.count(w) || !p.is_interior_lattice_edge(u, w)) continue;
        if (p.is_boundary_vertex(w)) {
          if (v0 < w) {
            vpath.push_back(w);
            evaluate(vpath);
            vpath.pop_back();
          }
          continue;
        }
        auto it = to_boundary.find(w);
        int back = it == to_boundary.end() ? cap + 1 : it->second;
        if (static_cast<int>(vpath.size()) + back > cap) continue;
        vpath.push_back(w);
        on.insert(w);
        extend(w);
        on.erase(w);
        vpath.pop_back();
      }
    };
    extend(v0);
  }
  return best;
}

PlanResult auto_plan(const Instance& inst, bool race) {
  ShapeProfile profile = compute_shape_profile(inst.polyomino);
  if (!race) {
    if (profile.bottleneck >= 8) return plan_narrow(inst);
    if (profile.scale >= 3) return plan_scaled(inst);
    return plan_any(inst);
  }

  std::optional<PlanResult> best;
  auto consider = [&](PlanResult (*planner)(const Instance&)) {
    try {
      PlanResult r = planner(inst);
      if (!best || r.makespan < best->makespan) best = std::move(r);
    } catch (const Error&) {
      // Planner not applicable; skip it in the race.
    }
  };
  consider(plan_any);
  consider(plan_scaled);
  consider(plan_bottleneck);
  consider(plan_narrow);
  if (!best) throw Error(ErrorCode::NotReconfigurable, "no planner applies");
  return *best;
}

std::string plan_result_to_json(const PlanResult& r) {
  nlohmann::json j;
  j["algorithm"] = algorithm_name(r.algorithm);
  j["makespan"] = r.makespan;
  j["diameter"] = r.diameter;
  j["lower_bound"] = r.lower_bound;
  j["stretch_vs_lb"] = r.stretch_vs_lb;
  return j.dump(2);
}

}  // namespace mapf

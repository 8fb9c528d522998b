#include "mapf/routing.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace mapf {

Configuration apply_matching(const Polyomino& p, const Configuration& c,
                             const std::vector<DualEdge>& round) {
  std::vector<int> labels = c.labels();
  std::vector<char> used(p.area(), 0);
  for (const DualEdge& e : round) {
    if (used[e.a] || used[e.b])
      throw Error(ErrorCode::NotAMatching, "matching round shares a cell");
    used[e.a] = used[e.b] = 1;
    std::swap(labels[e.a], labels[e.b]);
  }
  return Configuration::from_labels(std::move(labels));
}

Schedule compile_matching_sequence(const Polyomino& p, const SquareCover& cover,
                                   const MatchingSequence& seq) {
  Schedule out;
  for (const std::vector<DualEdge>& round : seq.rounds)
    out = concat(std::move(out), realize_matching(p, cover, round));
  return out;
}

// ---------------------------------------------------------------------------
// Tree routing.

namespace {

struct TreeRouter {
  const Polyomino& p;
  std::vector<std::vector<int>> adj;   // tree adjacency over cell indices
  std::vector<int> label_at;           // vertex -> token label
  std::vector<int> target_of;          // label-1 -> destination vertex
  std::vector<std::vector<DualEdge>> out_rounds;

  void swap_edge(std::vector<DualEdge>& round, int u, int v) {
    round.push_back({std::min(u, v), std::max(u, v)});
    std::swap(label_at[u], label_at[v]);
  }

  // Odd-even transposition along an explicit path.
  std::vector<std::vector<DualEdge>> route_path(const std::vector<int>& path) {
    int len = static_cast<int>(path.size());
    std::vector<int> rank_at(len);  // position -> target rank along the path
    std::vector<int> rank_of(p.area(), -1);
    for (int i = 0; i < len; ++i) rank_of[path[i]] = i;
    for (int i = 0; i < len; ++i) rank_at[i] = rank_of[target_of[label_at[path[i]] - 1]];

    std::vector<std::vector<DualEdge>> rounds;
    for (int pass = 0; pass <= len + 1; ++pass) {
      if (std::is_sorted(rank_at.begin(), rank_at.end())) return rounds;
      std::vector<DualEdge> round;
      for (int j = pass % 2; j + 1 < len; j += 2)
        if (rank_at[j] > rank_at[j + 1]) {
          std::swap(rank_at[j], rank_at[j + 1]);
          swap_edge(round, path[j], path[j + 1]);
        }
      if (!round.empty()) rounds.push_back(std::move(round));
    }
    throw Error(ErrorCode::Internal, "path routing failed to converge");
  }

  // Routes the subtree spanned by verts; returns the rounds it used.
  std::vector<std::vector<DualEdge>> route(const std::vector<int>& verts) {
    if (verts.size() <= 1) return {};

    std::set<int> vset(verts.begin(), verts.end());
    auto local_degree = [&](int v) {
      int d = 0;
      for (int w : adj[v])
        if (vset.count(w)) ++d;
      return d;
    };

    bool is_path = true;
    for (int v : verts)
      if (local_degree(v) > 2) is_path = false;
    if (is_path) {
      int end = verts[0];
      for (int v : verts)
        if (local_degree(v) == 1) end = v;
      std::vector<int> path{end};
      int prev = -1;
      while (path.size() < verts.size()) {
        for (int w : adj[path.back()])
          if (w != prev && vset.count(w)) {
            prev = path.back();
            path.push_back(w);
            break;
          }
      }
      return route_path(path);
    }

    // Centroid of the subtree.
    std::map<int, int> subtree;
    std::function<int(int, int)> sizes = [&](int v, int parent) {
      int s = 1;
      for (int w : adj[v])
        if (w != parent && vset.count(w)) s += sizes(w, v);
      subtree[v] = s;
      return s;
    };
    int n1 = sizes(verts[0], -1);
    int centroid = verts[0], best = n1;
    std::function<void(int, int)> find = [&](int v, int parent) {
      int heaviest = n1 - subtree[v];
      for (int w : adj[v])
        if (w != parent && vset.count(w)) {
          heaviest = std::max(heaviest, subtree[w]);
          find(w, v);
        }
      if (heaviest < best || (heaviest == best && v < centroid)) {
        best = heaviest;
        centroid = v;
      }
    };
    find(verts[0], -1);

    // Components of the subtree minus the centroid, each rooted at a
    // neighbor of the centroid.
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(p.area(), -1);
    std::vector<int> parent_of(p.area(), -1);
    std::vector<std::vector<int>> bfs_order;
    for (int r : adj[centroid]) {
      if (!vset.count(r)) continue;
      int ci = static_cast<int>(comps.size());
      std::vector<int> comp, order;
      std::queue<int> queue;
      queue.push(r);
      comp_of[r] = ci;
      parent_of[r] = centroid;
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop();
        comp.push_back(v);
        order.push_back(v);
        for (int w : adj[v])
          if (w != centroid && vset.count(w) && comp_of[w] < 0 && w != parent_of[v]) {
            comp_of[w] = ci;
            parent_of[w] = v;
            queue.push(w);
          }
      }
      comps.push_back(std::move(comp));
      bfs_order.push_back(std::move(order));
    }

    auto home_of_label = [&](int label) {
      int t = target_of[label - 1];
      return t == centroid ? -1 : comp_of[t];
    };

    // Crossing phase: pump every token through the centroid into the
    // component holding its target.
    std::vector<std::vector<DualEdge>> rounds;
    int guard = 4 * n1 + 8;
    while (true) {
      bool settled = home_of_label(label_at[centroid]) == -1;
      if (settled)
        for (size_t ci = 0; ci < comps.size() && settled; ++ci)
          for (int v : comps[ci])
            if (home_of_label(label_at[v]) != static_cast<int>(ci)) {
              settled = false;
              break;
            }
      if (settled) break;
      if (--guard < 0)
        throw Error(ErrorCode::Internal, "tree routing crossing phase stalled");

      std::vector<DualEdge> round;
      std::vector<char> busy(p.area(), 0);
      // Centroid edge: discharge its token home, or load a misplaced one.
      int c_home = home_of_label(label_at[centroid]);
      if (c_home >= 0) {
        int root = bfs_order[c_home][0];
        if (home_of_label(label_at[root]) != c_home) {
          swap_edge(round, centroid, root);
          busy[centroid] = busy[root] = 1;
        }
      } else {
        int pick = -1, pick_count = 0;
        for (size_t ci = 0; ci < comps.size(); ++ci) {
          int root = bfs_order[ci][0];
          if (home_of_label(label_at[root]) == static_cast<int>(ci)) continue;
          int count = 0;
          for (int v : comps[ci])
            if (home_of_label(label_at[v]) != static_cast<int>(ci)) ++count;
          if (count > pick_count) {
            pick_count = count;
            pick = static_cast<int>(ci);
          }
        }
        if (pick >= 0) {
          int root = bfs_order[pick][0];
          swap_edge(round, centroid, root);
          busy[centroid] = busy[root] = 1;
        }
      }
      // Climbing: misplaced tokens move toward the centroid past settled
      // ones, in BFS order so convoys advance front-first.
      for (size_t ci = 0; ci < comps.size(); ++ci)
        for (int v : bfs_order[ci]) {
          int u = parent_of[v];
          if (u == centroid) continue;
          if (busy[u] || busy[v]) continue;
          bool v_wrong = home_of_label(label_at[v]) != static_cast<int>(ci);
          bool u_wrong = home_of_label(label_at[u]) != static_cast<int>(ci);
          if (v_wrong && !u_wrong) {
            swap_edge(round, u, v);
            busy[u] = busy[v] = 1;
          }
        }
      if (round.empty())
        throw Error(ErrorCode::Internal, "tree routing made no progress");
      rounds.push_back(std::move(round));
    }

    // Recurse on the components in parallel.
    std::vector<std::vector<std::vector<DualEdge>>> sub;
    size_t longest = 0;
    for (const std::vector<int>& comp : comps) {
      sub.push_back(route(comp));
      longest = std::max(longest, sub.back().size());
    }
    for (size_t r = 0; r < longest; ++r) {
      std::vector<DualEdge> round;
      for (const auto& s : sub)
        if (r < s.size()) round.insert(round.end(), s[r].begin(), s[r].end());
      rounds.push_back(std::move(round));
    }
    return rounds;
  }
};

}  // namespace

MatchingSequence tree_route(const Polyomino& p, const std::vector<DualEdge>& tree_edges,
                            const Configuration& source, const Configuration& target) {
  if (source.size() != p.area() || target.size() != p.area())
    throw Error(ErrorCode::LabelMismatch, "labelings do not span the domain");
  if (static_cast<int>(tree_edges.size()) != p.area() - 1)
    throw Error(ErrorCode::BadParameters, "edge set is not a spanning tree");

  TreeRouter router{p, {}, {}, {}, {}};
  router.adj.resize(p.area());
  for (const DualEdge& e : tree_edges) {
    router.adj[e.a].push_back(e.b);
    router.adj[e.b].push_back(e.a);
  }
  router.label_at = source.labels();
  router.target_of.resize(p.area());
  for (int l = 1; l <= p.area(); ++l) router.target_of[l - 1] = target.cell_of(l);

  std::vector<int> all(p.area());
  for (int i = 0; i < p.area(); ++i) all[i] = i;
  MatchingSequence seq;
  seq.rounds = router.route(all);

  for (int i = 0; i < p.area(); ++i)
    if (router.label_at[i] != target.label_at(i))
      throw Error(ErrorCode::Internal, "tree routing missed its target");
  return seq;
}

// ---------------------------------------------------------------------------
// BFS regions and cut expansions.

BfsRegion bfs_region(const Polyomino& q, Cell v, int r) {
  int start = q.index_of(v);
  if (start < 0) throw Error(ErrorCode::CellNotInDomain, "BFS source outside domain");
  std::vector<int> dist = q.bfs_distances({start});

  BfsRegion out;
  std::vector<char> in_region(q.area(), 0);
  for (int i = 0; i < q.area(); ++i)
    if (dist[i] <= r) {
      in_region[i] = 1;
      out.region.push_back(i);
    }

  std::vector<int> comp_of(q.area(), -1);
  for (int i = 0; i < q.area(); ++i) {
    if (in_region[i] || comp_of[i] >= 0) continue;
    int ci = static_cast<int>(out.components.size());
    std::vector<int> comp;
    std::queue<int> queue;
    queue.push(i);
    comp_of[i] = ci;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      comp.push_back(u);
      int nbr[4], cnt;
      q.neighbors(u, nbr, cnt);
      for (int j = 0; j < cnt; ++j)
        if (!in_region[nbr[j]] && comp_of[nbr[j]] < 0) {
          comp_of[nbr[j]] = ci;
          queue.push(nbr[j]);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.components.push_back(std::move(comp));
  }

  out.wavelets.resize(out.components.size());
  for (const DualEdge& e : q.dual_edges()) {
    if (in_region[e.a] && comp_of[e.b] >= 0)
      out.wavelets[comp_of[e.b]].push_back(e);
    else if (in_region[e.b] && comp_of[e.a] >= 0)
      out.wavelets[comp_of[e.a]].push_back(e);
  }
  return out;
}

std::vector<int> cut_expansion(const Polyomino& p, const Cut& c, int k) {
  if (c.cut_edges.empty()) throw Error(ErrorCode::InvalidCut, "cut has no edges");
  std::vector<int> result;
  if (k <= 0) return result;

  // A cell lies on a geodesic crossing path of length <= k exactly if some
  // cut edge (u, v) has dist(cell, u) and dist(cell, v) differing by one
  // (the step across the cut stays geodesic) with min + 1 <= k.
  std::vector<std::vector<int>> dists;
  for (const DualEdge& e : c.cut_edges) {
    dists.push_back(p.bfs_distances({e.a}));
    dists.push_back(p.bfs_distances({e.b}));
  }
  for (int i = 0; i < p.area(); ++i) {
    bool in = false;
    for (size_t e = 0; e < c.cut_edges.size() && !in; ++e) {
      int du = dists[2 * e][i], dv = dists[2 * e + 1][i];
      in = du != dv && std::min(du, dv) + 1 <= k;
    }
    if (in) result.push_back(i);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Patch trees.

PatchTree build_patch_tree(const Polyomino& p, int delta) {
  if (delta < 1) throw Error(ErrorCode::BadParameters, "patch radius below 1");

  int v0 = -1;
  for (int i = 0; i < p.area() && v0 < 0; ++i)
    if (p.is_boundary_cell(i)) v0 = i;
  std::vector<int> dist = p.bfs_distances({v0});

  PatchTree tree;
  struct Job {
    std::vector<int> cells;
    int radius;
    int parent;
    std::vector<DualEdge> cut;
  };
  std::vector<int> all(p.area());
  for (int i = 0; i < p.area(); ++i) all[i] = i;
  std::queue<Job> jobs;
  jobs.push({std::move(all), delta, -1, {}});

  std::vector<char> membership(p.area(), 0);
  while (!jobs.empty()) {
    Job job = std::move(jobs.front());
    jobs.pop();

    std::fill(membership.begin(), membership.end(), 0);
    for (int i : job.cells) membership[i] = 1;

    std::vector<char> in_core(p.area(), 0);
    for (int i : job.cells)
      if (dist[i] <= job.radius) in_core[i] = 1;

    // Components of the remainder; small ones are absorbed into the patch.
    std::vector<int> comp_of(p.area(), -1);
    std::vector<std::vector<int>> comps;
    for (int i : job.cells) {
      if (in_core[i] || comp_of[i] >= 0) continue;
      int ci = static_cast<int>(comps.size());
      std::vector<int> comp;
      std::queue<int> queue;
      queue.push(i);
      comp_of[i] = ci;
      while (!queue.empty()) {
        int u = queue.front();
        queue.pop();
        comp.push_back(u);
        int nbr[4], cnt;
        p.neighbors(u, nbr, cnt);
        for (int j = 0; j < cnt; ++j) {
          int w = nbr[j];
          if (membership[w] && !in_core[w] && comp_of[w] < 0) {
            comp_of[w] = ci;
            queue.push(w);
          }
        }
      }
      comps.push_back(std::move(comp));
    }

    std::vector<int> patch;
    for (int i : job.cells)
      if (in_core[i]) patch.push_back(i);
    std::vector<int> large;
    for (size_t ci = 0; ci < comps.size(); ++ci) {
      bool small = true;
      for (int i : comps[ci])
        if (dist[i] > job.radius + delta) small = false;
      if (small)
        patch.insert(patch.end(), comps[ci].begin(), comps[ci].end());
      else
        large.push_back(static_cast<int>(ci));
    }
    std::sort(patch.begin(), patch.end());

    int node_index = static_cast<int>(tree.nodes.size());
    PatchTree::Node node;
    node.patch = patch;
    node.parent = job.parent;
    node.cut = std::move(job.cut);
    node.depth = job.parent < 0 ? 0 : tree.nodes[job.parent].depth + 1;
    tree.nodes.push_back(std::move(node));
    if (job.parent >= 0) tree.nodes[job.parent].children.push_back(node_index);

    std::vector<char> in_patch(p.area(), 0);
    for (int i : patch) in_patch[i] = 1;
    for (int ci : large) {
      std::vector<DualEdge> cut;
      std::vector<char> in_comp(p.area(), 0);
      for (int i : comps[ci]) in_comp[i] = 1;
      for (int i : comps[ci]) {
        int nbr[4], cnt;
        p.neighbors(i, nbr, cnt);
        for (int j = 0; j < cnt; ++j)
          if (in_patch[nbr[j]])
            cut.push_back({std::min(i, nbr[j]), std::max(i, nbr[j])});
      }
      std::sort(comps[ci].begin(), comps[ci].end());
      jobs.push({std::move(comps[ci]), job.radius + delta, node_index, std::move(cut)});
    }
  }

  for (PatchTree::Node& node : tree.nodes) {
    node.region_f = node.patch;
    for (int child : node.children)
      node.region_f.insert(node.region_f.end(), tree.nodes[child].patch.begin(),
                           tree.nodes[child].patch.end());
    std::sort(node.region_f.begin(), node.region_f.end());
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Watershed groups and group routing.

GroupAssignment group_by_watershed(const Polyomino& p, const Skeleton& s) {
  GroupAssignment out;
  out.skeleton = s;
  out.group_of.assign(p.area(), -1);
  out.group_cells.resize(s.tiles.size());

  const int lambda = s.lambda;
  for (size_t ti = 0; ti < s.tiles.size(); ++ti) {
    Cell t = s.tiles[ti];
    for (int x = t.x; x < t.x + lambda; ++x)
      for (int y = t.y; y < t.y + lambda; ++y)
        out.group_of[p.index_of({x, y})] = static_cast<int>(ti);
  }
  // Remaining cells go to the lexicographically smallest tile whose
  // watershed contains them; tiles are sorted, so first hit wins.
  std::vector<Watershed> sheds;
  sheds.reserve(s.tiles.size());
  for (const Cell& t : s.tiles) sheds.push_back(compute_watershed(p, s, t));
  for (int i = 0; i < p.area(); ++i) {
    if (out.group_of[i] >= 0) continue;
    for (size_t ti = 0; ti < sheds.size(); ++ti)
      if (sheds[ti].contains(p.cell(i))) {
        out.group_of[i] = static_cast<int>(ti);
        break;
      }
    if (out.group_of[i] < 0)
      throw Error(ErrorCode::Internal, "cell outside every watershed");
  }
  for (int i = 0; i < p.area(); ++i) out.group_cells[out.group_of[i]].push_back(i);
  return out;
}

namespace {

// Union of two watersheds (plus any enclosed cells of p, so the region is a
// valid simple polyomino).
std::vector<int> pair_region_cells(const Polyomino& p, const Watershed& a,
                                   const Watershed& b) {
  std::set<Cell> cells(a.cells.begin(), a.cells.end());
  cells.insert(b.cells.begin(), b.cells.end());

  int lo_x = cells.begin()->x, hi_x = lo_x, lo_y = cells.begin()->y, hi_y = lo_y;
  for (const Cell& c : cells) {
    lo_x = std::min(lo_x, c.x);
    hi_x = std::max(hi_x, c.x);
    lo_y = std::min(lo_y, c.y);
    hi_y = std::max(hi_y, c.y);
  }
  // Flood the complement from the margin; unreached complement cells are
  // enclosed and get filled from p.
  int w = hi_x - lo_x + 3, h = hi_y - lo_y + 3;
  std::vector<char> blocked(w * h, 0), seen(w * h, 0);
  for (const Cell& c : cells) blocked[(c.x - lo_x + 1) + (c.y - lo_y + 1) * w] = 1;
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop();
    int x = i % w, y = i / w;
    const int nx[4] = {x + 1, x - 1, x, x}, ny[4] = {y, y, y + 1, y - 1};
    for (int j = 0; j < 4; ++j) {
      if (nx[j] < 0 || ny[j] < 0 || nx[j] >= w || ny[j] >= h) continue;
      int k = nx[j] + ny[j] * w;
      if (!blocked[k] && !seen[k]) {
        seen[k] = 1;
        queue.push(k);
      }
    }
  }
  for (int i = 0; i < w * h; ++i)
    if (!blocked[i] && !seen[i]) {
      Cell c{i % w + lo_x - 1, i / w + lo_y - 1};
      if (!p.contains(c))
        throw Error(ErrorCode::Internal, "watershed union encloses a domain hole");
      cells.insert(c);
    }

  std::vector<int> indices;
  for (const Cell& c : cells) {
    int idx = p.index_of(c);
    if (idx < 0) throw Error(ErrorCode::Internal, "watershed cell outside domain");
    indices.push_back(idx);
  }
  return indices;
}

// Reorders agents inside a sub-region of p: the agent at region cell i must
// end at region cell perm[i].  Returns the schedule in absolute coordinates.
Schedule reorder_cells(const Polyomino& p, const std::vector<int>& region,
                       const std::vector<int>& perm) {
  bool identity = true;
  for (size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) identity = false;
  if (identity) return {};

  std::vector<Cell> cells;
  for (int i : region) cells.push_back(p.cell(i));
  Polyomino sub = Polyomino::from_cells(cells);
  // Region cells are sorted by index, which matches the sub-polyomino's
  // sorted cell order one-to-one.
  std::vector<int> target_labels(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) target_labels[perm[i]] = static_cast<int>(i) + 1;
  Configuration start = Configuration::identity(sub);
  Configuration target = Configuration::from_labels(std::move(target_labels));
  return reorder_region(sub, start, target);
}

// Greedily packs jobs with disjoint cell sets into batches; jobs in a batch
// run in parallel, batches run back to back.
Schedule run_batched(const Polyomino& p,
                     std::vector<std::pair<std::vector<int>, Schedule>> jobs) {
  Schedule out;
  std::vector<char> done(jobs.size(), 0);
  size_t remaining = jobs.size();
  while (remaining > 0) {
    std::vector<char> claimed(p.area(), 0);
    std::vector<std::pair<std::vector<int>, Schedule>> batch;
    for (size_t j = 0; j < jobs.size(); ++j) {
      if (done[j]) continue;
      bool free = true;
      for (int i : jobs[j].first)
        if (claimed[i]) free = false;
      if (!free) continue;
      for (int i : jobs[j].first) claimed[i] = 1;
      batch.push_back(jobs[j]);
      done[j] = 1;
      --remaining;
    }
    out = concat(std::move(out), merge_parallel(batch, p));
  }
  return out;
}

// Everything route_groups_impl needs to know about a partition of the domain
// into tile-anchored groups.
struct GroupSetup {
  std::vector<Cell> anchors;                   // one anchor per group
  int step = 1;                                // anchor grid pitch
  std::vector<std::vector<int>> adjacency;     // group graph
  const std::vector<int>* group_of = nullptr;  // cell index -> group
  const std::vector<std::vector<int>>* group_cells = nullptr;
  const SquareCover* cover = nullptr;          // square cover of the full domain
  std::function<std::vector<int>(int, int)> pair_region;  // sorted cell indices
  std::function<std::vector<int>(int)> final_region;      // sorted cell indices
};

GroupRouteResult route_groups_impl(const Polyomino& p, const GroupSetup& su,
                                   const Instance& inst) {
  const int step = su.step;
  const int tiles = static_cast<int>(su.anchors.size());
  const std::vector<int>& group_of = *su.group_of;
  const std::vector<std::vector<int>>& group_cells = *su.group_cells;

  // Tile graph distances from every tile, for routing decisions.
  std::vector<std::vector<int>> tile_dist(tiles);
  for (int t = 0; t < tiles; ++t) {
    tile_dist[t].assign(tiles, -1);
    std::queue<int> queue;
    queue.push(t);
    tile_dist[t][t] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (int v : su.adjacency[u])
        if (tile_dist[t][v] < 0) {
          tile_dist[t][v] = tile_dist[t][u] + 1;
          queue.push(v);
        }
    }
  }

  // The four matchings covering the tile grid graph: horizontal and
  // vertical edges split by the parity of the lower tile coordinate.
  std::map<Cell, int> anchor_index;
  for (int t = 0; t < tiles; ++t) anchor_index[su.anchors[t]] = t;
  auto tile_at = [&](Cell a) {
    auto it = anchor_index.find(a);
    return it == anchor_index.end() ? -1 : it->second;
  };
  std::vector<std::vector<std::pair<int, int>>> matchings(4);
  for (int t = 0; t < tiles; ++t) {
    Cell a = su.anchors[t];
    int right = tile_at({a.x + step, a.y});
    int up = tile_at({a.x, a.y + step});
    if (right >= 0) matchings[(a.x / step) % 2 == 0 ? 0 : 1].emplace_back(t, right);
    if (up >= 0) matchings[(a.y / step) % 2 == 0 ? 2 : 3].emplace_back(t, up);
  }

  // State: where each label currently sits, and which group it wants.
  std::vector<int> pos_of(p.area() + 1);      // label -> cell index
  std::vector<int> label_at(p.area());        // cell index -> label
  std::vector<int> home_group(p.area() + 1);  // label -> target group
  for (int i = 0; i < p.area(); ++i) {
    int l = inst.start.label_at(i);
    pos_of[l] = i;
    label_at[i] = l;
    home_group[inst.target.label_at(i)] = group_of[i];
  }

  auto misplaced = [&]() {
    int count = 0;
    for (int i = 0; i < p.area(); ++i)
      if (home_group[label_at[i]] != group_of[i]) ++count;
    return count;
  };

  auto total_distance = [&]() {
    int phi = 0;
    for (int i = 0; i < p.area(); ++i)
      phi += tile_dist[group_of[i]][home_group[label_at[i]]];
    return phi;
  };

  Schedule schedule;
  int rounds = 0;
  const int round_cap = std::max(8, 8 * p.area() / (step * step));
  int sweep = 0;
  int stalled_sweeps = 0;
  int last_phi = total_distance();
  // Phase 1: parallel greedy sweeps over the four matchings.  This clears
  // nearly everything fast, but the filler heuristic can plateau near the
  // end, so we stop as soon as the total distance stops dropping.
  while (misplaced() > 0 && stalled_sweeps < 8 && rounds < round_cap) {
    const auto& matching = matchings[sweep % 4];
    sweep++;

    std::vector<std::pair<std::vector<int>, Schedule>> jobs;
    for (const auto& [ta, tb] : matching) {
      // Agents that get closer to their target group by crossing this edge.
      auto wanters = [&](int from, int to) {
        std::vector<std::pair<int, int>> list;  // (-distance, label)
        for (int i : group_cells[from]) {
          int l = label_at[i];
          int g = home_group[l];
          if (g == from) continue;
          if (tile_dist[to][g] < tile_dist[from][g])
            list.emplace_back(-tile_dist[from][g], l);
        }
        std::sort(list.begin(), list.end());
        return list;
      };
      std::vector<std::pair<int, int>> fwd = wanters(ta, tb), bwd = wanters(tb, ta);
      int x = static_cast<int>(std::max(fwd.size(), bwd.size()));
      if (x == 0) continue;

      // Fillers: misplaced non-candidates first, home agents as a last
      // resort, so exchanged counts match in both directions.  The filler
      // order is rotated by the sweep index; a fixed order can enter a
      // periodic ping-pong where the same filler keeps bouncing back.
      auto pad = [&](std::vector<std::pair<int, int>>& list, int from) {
        std::set<int> chosen;
        for (auto& [d, l] : list) chosen.insert(l);
        std::vector<int> misplaced_rest, home_rest;
        for (int i : group_cells[from]) {
          int l = label_at[i];
          if (chosen.count(l)) continue;
          (home_group[l] != from ? misplaced_rest : home_rest).push_back(l);
        }
        auto rotate_by_sweep = [&](std::vector<int>& v) {
          if (v.size() > 1)
            std::rotate(v.begin(), v.begin() + sweep % v.size(), v.end());
        };
        rotate_by_sweep(misplaced_rest);
        rotate_by_sweep(home_rest);
        for (int l : misplaced_rest)
          if (static_cast<int>(list.size()) < x) list.emplace_back(0, l);
        for (int l : home_rest)
          if (static_cast<int>(list.size()) < x) list.emplace_back(0, l);
      };
      pad(fwd, ta);
      pad(bwd, tb);
      x = std::min({x, static_cast<int>(fwd.size()), static_cast<int>(bwd.size())});
      if (x == 0) continue;

      std::vector<int> region = su.pair_region(ta, tb);
      std::vector<int> index_in_region(p.area(), -1);
      for (size_t i = 0; i < region.size(); ++i) index_in_region[region[i]] = static_cast<int>(i);

      std::vector<int> perm(region.size());
      for (size_t i = 0; i < region.size(); ++i) perm[i] = static_cast<int>(i);
      for (int i = 0; i < x; ++i) {
        int la = fwd[i].second, lb = bwd[i].second;
        int pa = index_in_region[pos_of[la]], pb = index_in_region[pos_of[lb]];
        std::swap(perm[pa], perm[pb]);
      }
      Schedule job = reorder_cells(p, region, perm);

      // Update bookkeeping.
      for (int i = 0; i < x; ++i) {
        int la = fwd[i].second, lb = bwd[i].second;
        std::swap(label_at[pos_of[la]], label_at[pos_of[lb]]);
        std::swap(pos_of[la], pos_of[lb]);
        // Group membership follows the cells.
      }
      jobs.emplace_back(std::move(region), std::move(job));
    }
    if (!jobs.empty()) {
      schedule = concat(std::move(schedule), run_batched(p, std::move(jobs)));
      ++rounds;
    }
    int phi = total_distance();
    stalled_sweeps = phi < last_phi ? 0 : stalled_sweeps + 1;
    last_phi = phi;
  }

  // Phase 2: carry the remaining defects home one at a time.  Each delivery
  // moves one agent all the way to its home group (distance d) while
  // displacing at most d - 1 bystanders by one step each, so the total
  // distance strictly drops and this terminates.
  // A full pair-region reorder is expensive for a single swap.  Instead, walk
  // the carried agent along a path with adjacent gadget swaps (constant cost
  // each) and then walk the partner back, restoring every bystander.
  auto swap_adjacent = [&](int a, int b) {
    DualEdge e{std::min(a, b), std::max(a, b)};
    schedule = concat(std::move(schedule), compact(realize_matching(p, *su.cover, {e})));
    int la = label_at[a], lb = label_at[b];
    std::swap(label_at[a], label_at[b]);
    std::swap(pos_of[la], pos_of[lb]);
  };
  auto exchange_labels = [&](int ta, int tb, int la, int lb) {
    std::vector<int> region = su.pair_region(ta, tb);
    std::vector<char> in_region(p.area(), 0);
    for (int c : region) in_region[c] = 1;
    const int from = pos_of[la], to = pos_of[lb];
    std::vector<int> prev(p.area(), -1);
    std::queue<int> queue;
    queue.push(from);
    prev[from] = from;
    while (!queue.empty() && prev[to] < 0) {
      int u = queue.front();
      queue.pop();
      int nbr[4], cnt;
      p.neighbors(u, nbr, cnt);
      for (int j = 0; j < cnt; ++j)
        if (in_region[nbr[j]] && prev[nbr[j]] < 0) {
          prev[nbr[j]] = u;
          queue.push(nbr[j]);
        }
    }
    if (prev[to] < 0) throw Error(ErrorCode::Internal, "pair region disconnected");
    std::vector<int> path;
    for (int c = to; ; c = prev[c]) {
      path.push_back(c);
      if (c == prev[c]) break;
    }
    std::reverse(path.begin(), path.end());  // from -> to
    for (size_t i = 0; i + 1 < path.size(); ++i) swap_adjacent(path[i], path[i + 1]);
    for (size_t i = path.size() - 2; i >= 1; --i) swap_adjacent(path[i - 1], path[i]);
    ++rounds;
  };
  long long guard = static_cast<long long>(last_phi + 1) * (tiles + 2);
  while (misplaced() > 0) {
    // Adjacent defects first: delivering one strictly shrinks the defect
    // count, which drains the cascade a long delivery leaves behind.  Long
    // deliveries go farthest-first.
    int carried = -1, best_dist = 0;
    for (int i = 0; i < p.area(); ++i) {
      int l = label_at[i];
      int dist = tile_dist[home_group[l]][group_of[i]];
      if (dist == 0) continue;
      if (dist == 1) {
        carried = l;
        break;
      }
      if (dist > best_dist) {
        best_dist = dist;
        carried = l;
      }
    }
    int cur = group_of[pos_of[carried]];
    const int home = home_group[carried];
    while (cur != home) {
      if (--guard < 0)
        throw Error(ErrorCode::Internal, "group routing endgame exceeded its budget");
      int nxt = -1;
      for (int v : su.adjacency[cur])
        if (tile_dist[home][v] == tile_dist[home][cur] - 1 && (nxt < 0 || v < nxt)) nxt = v;
      if (nxt < 0) throw Error(ErrorCode::Internal, "tile path step missing");

      // Partner leaving nxt: on the last hop it must be a foreigner (one
      // exists, since the carried agent's home slot is taken); otherwise
      // prefer agents that get closer to home by moving, then home agents.
      const bool last_hop = nxt == home;
      int best = -1, best_rank = 100;
      for (int i : group_cells[nxt]) {
        int l = label_at[i];
        int g = home_group[l];
        int rank;
        if (g == nxt)
          rank = last_hop ? 100 : 1;
        else
          rank = tile_dist[g][cur] < tile_dist[g][nxt] ? 0 : 2;
        if (rank < best_rank) {
          best_rank = rank;
          best = l;
        }
      }
      if (best < 0)
        throw Error(ErrorCode::Internal, "no exchange partner available");
      exchange_labels(cur, nxt, carried, best);
      cur = nxt;
    }
  }

  // Final placement: put every agent on its exact target cell within its
  // group's watershed.
  std::vector<std::pair<std::vector<int>, Schedule>> jobs;
  for (int t = 0; t < tiles; ++t) {
    std::vector<int> region = su.final_region(t);
    std::vector<int> index_in_region(p.area(), -1);
    for (size_t i = 0; i < region.size(); ++i) index_in_region[region[i]] = static_cast<int>(i);

    std::vector<int> perm(region.size());
    for (size_t i = 0; i < region.size(); ++i) perm[i] = static_cast<int>(i);
    for (int i : group_cells[t]) {
      int l = label_at[i];
      int target_cell = inst.target.cell_of(l);
      perm[index_in_region[i]] = index_in_region[target_cell];
    }
    jobs.emplace_back(region, reorder_cells(p, region, perm));
  }
  schedule = concat(std::move(schedule), run_batched(p, std::move(jobs)));

  GroupRouteResult result;
  result.schedule = compact(std::move(schedule));
  result.rounds = rounds;
  return result;
}

}  // namespace

GroupRouteResult group_route(const Polyomino& p, const GroupAssignment& groups,
                             const Instance& inst) {
  const Skeleton& s = groups.skeleton;
  if (s.lambda < 2)
    throw Error(ErrorCode::BottleneckTooSmall, "group routing needs lambda >= 2");
  ReconfigurabilityResult rec = check_universal_reconfigurability(p);
  if (!rec.reconfigurable)
    throw Error(ErrorCode::NotReconfigurable, "domain is not reconfigurable");

  std::vector<Watershed> sheds;
  for (const Cell& t : s.tiles) sheds.push_back(compute_watershed(p, s, t));

  GroupSetup su;
  su.anchors = s.tiles;
  su.step = s.lambda;
  su.adjacency = s.tile_dual;
  su.group_of = &groups.group_of;
  su.group_cells = &groups.group_cells;
  su.pair_region = [&p, &sheds](int ta, int tb) {
    return pair_region_cells(p, sheds[ta], sheds[tb]);
  };
  su.final_region = [&p, &sheds](int t) {
    std::vector<int> region;
    for (const Cell& c : sheds[t].cells) region.push_back(p.index_of(c));
    std::sort(region.begin(), region.end());
    return region;
  };
  su.cover = &rec.cover;
  return route_groups_impl(p, su, inst);
}

GroupRouteResult route_scaled_tiles(const Polyomino& p, int c, const Instance& inst) {
  if (c < 3)
    throw Error(ErrorCode::ScaleTooSmall, "tile routing needs scale >= 3");
  auto [scale, offset] = compute_scale(p);
  if (scale < c || scale % c != 0)
    throw Error(ErrorCode::ScaleTooSmall, "polyomino is not an exact c-tiling");
  const int ox = offset.first % c, oy = offset.second % c;

  // Exact tiling by aligned c x c tiles: every cell belongs to one tile.
  std::map<Cell, int> anchor_index;
  std::vector<Cell> anchors;
  std::vector<int> group_of(p.area(), -1);
  for (int i = 0; i < p.area(); ++i) {
    Cell cell = p.cell(i);
    auto fl = [c](int v) { return v >= 0 ? v / c : -((-v + c - 1) / c); };
    Cell a{fl(cell.x - ox) * c + ox, fl(cell.y - oy) * c + oy};
    auto it = anchor_index.find(a);
    if (it == anchor_index.end()) {
      it = anchor_index.emplace(a, static_cast<int>(anchors.size())).first;
      anchors.push_back(a);
    }
    group_of[i] = it->second;
  }
  // Cells are sorted, so anchors came out sorted as well except for column
  // order; rebuild indices against the sorted anchor list.
  std::vector<Cell> sorted_anchors = anchors;
  std::sort(sorted_anchors.begin(), sorted_anchors.end());
  std::map<Cell, int> rank;
  for (size_t i = 0; i < sorted_anchors.size(); ++i) rank[sorted_anchors[i]] = static_cast<int>(i);
  for (int i = 0; i < p.area(); ++i) group_of[i] = rank[anchors[group_of[i]]];

  const int tiles = static_cast<int>(sorted_anchors.size());
  std::vector<std::vector<int>> group_cells(tiles);
  for (int i = 0; i < p.area(); ++i) group_cells[group_of[i]].push_back(i);
  for (auto& cells : group_cells)
    if (static_cast<int>(cells.size()) != c * c)
      throw Error(ErrorCode::Internal, "partial tile in an exact tiling");

  std::vector<std::vector<int>> adjacency(tiles);
  for (int t = 0; t < tiles; ++t) {
    Cell a = sorted_anchors[t];
    for (Cell d : {Cell{a.x + c, a.y}, Cell{a.x - c, a.y}, Cell{a.x, a.y + c},
                   Cell{a.x, a.y - c}}) {
      auto it = rank.find(d);
      if (it != rank.end()) adjacency[t].push_back(it->second);
    }
    std::sort(adjacency[t].begin(), adjacency[t].end());
  }

  GroupSetup su;
  su.anchors = sorted_anchors;
  su.step = c;
  su.adjacency = adjacency;
  su.group_of = &group_of;
  su.group_cells = &group_cells;
  su.pair_region = [&](int ta, int tb) {
    std::vector<int> region = group_cells[ta];
    region.insert(region.end(), group_cells[tb].begin(), group_cells[tb].end());
    std::sort(region.begin(), region.end());
    return region;
  };
  su.final_region = [&](int t) { return group_cells[t]; };
  ReconfigurabilityResult rec = check_universal_reconfigurability(p);
  if (!rec.reconfigurable)
    throw Error(ErrorCode::NotReconfigurable, "domain is not reconfigurable");
  su.cover = &rec.cover;
  return route_groups_impl(p, su, inst);
}

Schedule reorder_region(const Polyomino& region, const Configuration& c,
                        const Configuration& target) {
  if (c == target) return {};
  if (region.area() == region.width() * region.height() && region.width() >= 2 &&
      region.height() >= 2)
    return sort_rectangle(region, c, target);
  if (is_hv_convex(region)) return route_convex_piece(region, c, target);

  ReconfigurabilityResult rec = check_universal_reconfigurability(region);
  if (!rec.reconfigurable)
    throw Error(ErrorCode::NotReconfigurable, "region is not reconfigurable");
  std::vector<DualEdge> tree;
  std::vector<char> seen(region.area(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    int nbr[4], cnt;
    region.neighbors(i, nbr, cnt);
    for (int j = 0; j < cnt; ++j)
      if (!seen[nbr[j]]) {
        seen[nbr[j]] = 1;
        tree.push_back({std::min(i, nbr[j]), std::max(i, nbr[j])});
        stack.push_back(nbr[j]);
      }
  }
  return compile_matching_sequence(region, rec.cover,
                                   tree_route(region, tree, c, target));
}

}  // namespace mapf

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "mapf/routing.hpp"
#include "test_util.hpp"

using namespace mapf;

namespace {

Configuration replay(const Polyomino& p, Configuration c, const MatchingSequence& seq) {
  for (const auto& round : seq.rounds) c = apply_matching(p, c, round);
  return c;
}

std::vector<DualEdge> random_spanning_tree(const Polyomino& p, unsigned seed) {
  std::vector<DualEdge> edges = p.dual_edges();
  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<int> parent(p.area());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  std::vector<DualEdge> tree;
  for (const DualEdge& e : edges) {
    int ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      tree.push_back(e);
    }
  }
  return tree;
}

// Shortest cut through the interior starting from the given boundary vertex,
// or nothing if every interior path loops back to the same boundary region.
std::optional<Cut> some_cut_from(const Polyomino& p, Vertex start) {
  std::map<Vertex, Vertex> pred;
  std::queue<Vertex> queue;
  queue.push(start);
  pred[start] = start;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop();
    const Vertex nbrs[4] = {{v.x + 1, v.y}, {v.x - 1, v.y}, {v.x, v.y + 1}, {v.x, v.y - 1}};
    for (const Vertex& w : nbrs) {
      if (pred.count(w) || !p.is_interior_lattice_edge(v, w)) continue;
      if (v != start && p.is_boundary_vertex(v)) continue;  // can't pass through
      pred[w] = v;
      if (p.is_boundary_vertex(w)) {
        std::vector<Vertex> path{w};
        for (Vertex u = v; ; u = pred[u]) {
          path.push_back(u);
          if (u == start) break;
        }
        std::reverse(path.begin(), path.end());
        try {
          return p.make_cut(path);
        } catch (const Error&) {
          continue;
        }
      }
      queue.push(w);
    }
  }
  return std::nullopt;
}

int depth_of(const Polyomino& p) {
  std::vector<int> sources;
  for (int i = 0; i < p.area(); ++i)
    if (p.is_boundary_cell(i)) sources.push_back(i);
  std::vector<int> dist = p.bfs_distances(sources);
  return *std::max_element(dist.begin(), dist.end());
}

}  // namespace

TEST_CASE("apply_matching swaps and validates") {
  Polyomino p = Polyomino::parse("###");
  Configuration c = Configuration::identity(p);
  Configuration after = apply_matching(p, c, {{0, 1}});
  CHECK(after.label_at(0) == 2);
  CHECK(after.label_at(1) == 1);
  CHECK(after.label_at(2) == 3);
  CHECK_THROWS_AS(apply_matching(p, c, {{0, 1}, {1, 2}}), Error);
}

TEST_CASE("tree_route on paths") {
  Polyomino p2 = Polyomino::parse("##");
  MatchingSequence seq = tree_route(p2, {{0, 1}}, Configuration::identity(p2),
                                    Configuration::from_labels({2, 1}));
  CHECK(seq.rounds.size() == 1);

  Polyomino p8 = Polyomino::parse("########");
  std::vector<DualEdge> tree;
  for (int i = 0; i + 1 < 8; ++i) tree.push_back({i, i + 1});
  std::vector<int> rev(8);
  for (int i = 0; i < 8; ++i) rev[i] = 8 - i;
  Configuration target = Configuration::from_labels(rev);
  seq = tree_route(p8, tree, Configuration::identity(p8), target);
  CHECK(seq.rounds.size() <= 9);
  CHECK(replay(p8, Configuration::identity(p8), seq) == target);
}

TEST_CASE("tree_route on a star") {
  Polyomino p = Polyomino::parse(".#.\n###\n.#.");
  int center = p.index_of({1, 1});
  std::vector<DualEdge> tree;
  for (int i = 0; i < p.area(); ++i)
    if (i != center) tree.push_back({std::min(i, center), std::max(i, center)});
  for (unsigned seed = 1; seed <= 10; ++seed) {
    Configuration start = test_util::random_configuration(p, seed);
    Configuration target = test_util::random_configuration(p, seed + 50);
    MatchingSequence seq = tree_route(p, tree, start, target);
    CHECK(static_cast<int>(seq.rounds.size()) <= 4 * p.area());
    CHECK(replay(p, start, seq) == target);
  }
}

TEST_CASE("tree_route on random spanning trees") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    Polyomino p = test_util::random_simple_polyomino(6 + seed % 10, seed * 311);
    std::vector<DualEdge> tree = random_spanning_tree(p, seed);
    Configuration start = test_util::random_configuration(p, seed);
    Configuration target = test_util::random_configuration(p, seed + 99);
    MatchingSequence seq = tree_route(p, tree, start, target);
    INFO(p.serialize());
    CHECK(static_cast<int>(seq.rounds.size()) <= 4 * p.area() + 8);
    CHECK(replay(p, start, seq) == target);
  }
  Polyomino p = Polyomino::parse("##\n##");
  CHECK_THROWS_AS(tree_route(p, {{0, 1}}, Configuration::identity(p),
                             Configuration::identity(p)), Error);
}

TEST_CASE("compile_matching_sequence realizes tree routes") {
  Polyomino p = test_util::scaled_up(test_util::random_simple_polyomino(5, 42), 2);
  ReconfigurabilityResult rec = check_universal_reconfigurability(p);
  REQUIRE(rec.reconfigurable);
  std::vector<DualEdge> tree = random_spanning_tree(p, 7);
  Configuration start = test_util::random_configuration(p, 1);
  Configuration target = test_util::random_configuration(p, 2);
  MatchingSequence seq = tree_route(p, tree, start, target);
  Schedule s = compile_matching_sequence(p, rec.cover, seq);
  CHECK(s.makespan() <= 504 * static_cast<int>(seq.rounds.size()));
  ValidationReport r = validate_schedule({p, start, target}, s);
  INFO(r.reason);
  CHECK(r.valid);
}

TEST_CASE("bfs_region structure") {
  Polyomino p = Polyomino::parse("###\n###\n###");
  BfsRegion reg = bfs_region(p, {1, 1}, 1);
  CHECK(reg.region.size() == 5);
  CHECK(reg.components.size() == 4);
  for (const auto& w : reg.wavelets) CHECK(w.size() == 2);

  reg = bfs_region(p, {1, 1}, 4);
  CHECK(reg.region.size() == 9);
  CHECK(reg.components.empty());

  reg = bfs_region(p, {0, 0}, 0);
  CHECK(reg.region.size() == 1);
  REQUIRE(reg.components.size() == 1);
  CHECK(reg.wavelets[0].size() == 2);

  Polyomino u = Polyomino::parse("#.#\n#.#\n###");
  reg = bfs_region(u, {0, 2}, 1);
  CHECK(reg.components.size() == 1);
  CHECK(reg.wavelets[0].size() == 1);  // corridor of width 1 along the base

  CHECK_THROWS_AS(bfs_region(p, {5, 5}, 1), Error);
}

TEST_CASE("wavelets are bounded by the domain depth") {
  for (unsigned seed = 1; seed <= 15; ++seed) {
    Polyomino p = test_util::random_simple_polyomino(20 + 3 * (seed % 5), seed * 733);
    int mu = depth_of(p);
    for (int vi = 0; vi < p.area(); vi += 3)
      for (int r = 0; r <= 6; r += 2) {
        BfsRegion reg = bfs_region(p, p.cell(vi), r);
        for (const auto& w : reg.wavelets)
          CHECK(static_cast<int>(w.size()) <= 48 * (mu + 1));
      }
  }
}

TEST_CASE("cut_expansion basics") {
  Polyomino p = Polyomino::parse("#####");
  Cut cut = p.make_cut({{2, 0}, {2, 1}});
  CHECK(cut_expansion(p, cut, 0).empty());
  std::vector<int> e1 = cut_expansion(p, cut, 1);
  CHECK(e1 == std::vector<int>{1, 2});
  std::vector<int> e2 = cut_expansion(p, cut, 2);
  CHECK(e2 == std::vector<int>{0, 1, 2, 3});
  std::vector<int> big = cut_expansion(p, cut, 10);
  CHECK(big.size() == 5);
}

TEST_CASE("cut_expansion agrees with the geodesic-path oracle") {
  for (unsigned seed = 1; seed <= 12; ++seed) {
    Polyomino p = test_util::random_simple_polyomino(14 + seed % 8, seed * 577);
    std::optional<Cut> cut;
    for (const Vertex& v : p.boundary_cycle()) {
      cut = some_cut_from(p, v);
      if (cut) break;
    }
    if (!cut) continue;

    std::vector<std::vector<int>> dist(p.area());
    for (int i = 0; i < p.area(); ++i) dist[i] = p.bfs_distances({i});
    for (int k = 0; k <= 5; ++k) {
      std::vector<int> expansion = cut_expansion(p, *cut, k);
      std::set<int> got(expansion.begin(), expansion.end());
      for (int c = 0; c < p.area(); ++c) {
        // Oracle: some geodesic of length <= k from c crosses the cut.
        bool expect = false;
        for (int w = 0; w < p.area() && !expect; ++w)
          for (const DualEdge& e : cut->cut_edges) {
            if (dist[c][w] > k) continue;
            if (dist[c][e.a] + 1 + dist[e.b][w] == dist[c][w] ||
                dist[c][e.b] + 1 + dist[e.a][w] == dist[c][w]) {
              expect = true;
              break;
            }
          }
        CHECK(got.count(c) == static_cast<size_t>(expect));
      }
      // Expansions grow with k and stay quadratically bounded.
      if (k > 0) {
        std::vector<int> prev = cut_expansion(p, *cut, k - 1);
        CHECK(std::includes(expansion.begin(), expansion.end(), prev.begin(), prev.end()));
        int m = cut->length;
        CHECK(static_cast<int>(expansion.size()) <= 8 * (k * k + m * k));
      }
    }
  }
}

TEST_CASE("build_patch_tree partitions the domain") {
  Polyomino rect = Polyomino::parse("####\n####\n####");
  PatchTree tree = build_patch_tree(rect, 20);
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].patch.size() == 12);
  CHECK(tree.nodes[0].parent == -1);

  Polyomino corridor = Polyomino::parse(std::string(24, '#'));
  tree = build_patch_tree(corridor, 5);
  CHECK(tree.nodes.size() >= 3);
  for (size_t i = 1; i < tree.nodes.size(); ++i) {
    CHECK(tree.nodes[i].parent >= 0);
    CHECK(!tree.nodes[i].cut.empty());
  }

  for (unsigned seed = 1; seed <= 10; ++seed) {
    Polyomino p = test_util::random_simple_polyomino(30, seed * 191);
    PatchTree t = build_patch_tree(p, 3);
    std::vector<int> owner(p.area(), -1);
    for (size_t ni = 0; ni < t.nodes.size(); ++ni)
      for (int c : t.nodes[ni].patch) {
        CHECK(owner[c] == -1);
        owner[c] = static_cast<int>(ni);
      }
    for (int c = 0; c < p.area(); ++c) CHECK(owner[c] >= 0);
    for (size_t ni = 0; ni < t.nodes.size(); ++ni) {
      const auto& node = t.nodes[ni];
      // Tree bookkeeping is mutually consistent.
      for (int ch : node.children) CHECK(t.nodes[ch].parent == static_cast<int>(ni));
      if (node.parent >= 0)
        CHECK(node.depth == t.nodes[node.parent].depth + 1);
      std::vector<int> expect = node.patch;
      for (int ch : node.children)
        expect.insert(expect.end(), t.nodes[ch].patch.begin(), t.nodes[ch].patch.end());
      std::sort(expect.begin(), expect.end());
      CHECK(node.region_f == expect);
      // Cut edges straddle the parent patch and this node's subtree.
      for (const DualEdge& e : node.cut) {
        int oa = owner[e.a], ob = owner[e.b];
        CHECK(((oa == node.parent && ob == static_cast<int>(ni)) ||
               (ob == node.parent && oa == static_cast<int>(ni))));
      }
    }
  }

  CHECK_THROWS_AS(build_patch_tree(rect, 0), Error);
}

TEST_CASE("group_by_watershed partitions cells near their tiles") {
  Polyomino p = test_util::scaled_up(test_util::random_simple_polyomino(6, 5), 8);
  ShapeProfile prof = compute_shape_profile(p);
  REQUIRE(prof.has_bottleneck(p.area()));
  REQUIRE(prof.bottleneck >= 8);
  Skeleton s = compute_skeleton(p, prof.bottleneck);
  GroupAssignment g = group_by_watershed(p, s);

  std::vector<int> counts(s.tiles.size(), 0);
  for (int i = 0; i < p.area(); ++i) {
    REQUIRE(g.group_of[i] >= 0);
    ++counts[g.group_of[i]];
  }
  for (size_t ti = 0; ti < s.tiles.size(); ++ti) {
    Watershed w = compute_watershed(p, s, s.tiles[ti]);
    CHECK(counts[ti] >= s.lambda * s.lambda);
    for (int i : g.group_cells[ti]) CHECK(w.contains(p.cell(i)));
  }
  // Tile cells stay with their own tile.
  for (size_t ti = 0; ti < s.tiles.size(); ++ti)
    for (int dx = 0; dx < s.lambda; ++dx)
      for (int dy = 0; dy < s.lambda; ++dy)
        CHECK(g.group_of[p.index_of({s.tiles[ti].x + dx, s.tiles[ti].y + dy})] ==
              static_cast<int>(ti));

  GroupAssignment again = group_by_watershed(p, s);
  CHECK(again.group_of == g.group_of);
}

TEST_CASE("group_route solves permutation instances") {
  for (const char* map : {"########\n########\n########\n########\n########\n########\n########\n########"}) {
    Polyomino p = Polyomino::parse(map);
    ShapeProfile prof = compute_shape_profile(p);
    REQUIRE(prof.bottleneck >= 8);
    Skeleton s = compute_skeleton(p, prof.bottleneck);
    GroupAssignment g = group_by_watershed(p, s);
    for (unsigned seed = 1; seed <= 3; ++seed) {
      Instance inst{p, test_util::random_configuration(p, seed),
                    test_util::random_configuration(p, seed + 10)};
      GroupRouteResult res = group_route(p, g, inst);
      ValidationReport r = validate_schedule(inst, res.schedule);
      INFO(r.reason << " at step " << r.failing_step);
      CHECK(r.valid);
      CHECK(res.rounds <= std::max(8, 8 * p.area() / (s.lambda * s.lambda)));
    }
  }
}

TEST_CASE("reorder_region dispatches by shape") {
  Polyomino rect = Polyomino::parse("####\n####\n####");
  Configuration start = test_util::random_configuration(rect, 3);
  Configuration target = test_util::random_configuration(rect, 4);
  ValidationReport r =
      validate_schedule({rect, start, target}, reorder_region(rect, start, target));
  CHECK(r.valid);

  Polyomino ell = Polyomino::parse("##..\n####\n####");
  start = test_util::random_configuration(ell, 5);
  target = test_util::random_configuration(ell, 6);
  r = validate_schedule({ell, start, target}, reorder_region(ell, start, target));
  CHECK(r.valid);

  Polyomino u = test_util::scaled_up(Polyomino::parse("#.#\n###"), 2);
  CHECK(!is_hv_convex(u));
  start = test_util::random_configuration(u, 7);
  target = test_util::random_configuration(u, 8);
  r = validate_schedule({u, start, target}, reorder_region(u, start, target));
  INFO(r.reason);
  CHECK(r.valid);

  Polyomino line = Polyomino::parse("#####");
  CHECK_THROWS_AS(reorder_region(line, Configuration::identity(line),
                                 Configuration::from_labels({2, 1, 3, 4, 5})), Error);
}

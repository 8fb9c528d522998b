#include "mapf/shape.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace mapf {

namespace {

// Prefix-sum occupancy over the bounding box for O(1) "square fully inside"
// queries.  Local coordinates: cell (x, y) maps to (x - min_x, y - min_y).
class SquareOracle {
 public:
  explicit SquareOracle(const Polyomino& p)
      : base_x_(p.min_x()), base_y_(p.min_y()), w_(p.width()), h_(p.height()),
        pref_((w_ + 1) * (h_ + 1), 0) {
    std::vector<int> occ(w_ * h_, 0);
    for (const Cell& c : p.cells()) occ[(c.x - base_x_) + (c.y - base_y_) * w_] = 1;
    for (int y = 0; y < h_; ++y)
      for (int x = 0; x < w_; ++x)
        at(x + 1, y + 1) = occ[x + y * w_] + at(x, y + 1) + at(x + 1, y) - at(x, y);
  }

  // True if the s x s square with bottom-left cell (x, y) lies inside.
  bool full(int x, int y, int s) const {
    int lx = x - base_x_, ly = y - base_y_;
    if (lx < 0 || ly < 0 || lx + s > w_ || ly + s > h_) return false;
    int sum = cat(lx + s, ly + s) - cat(lx, ly + s) - cat(lx + s, ly) + cat(lx, ly);
    return sum == s * s;
  }

  int base_x() const { return base_x_; }
  int base_y() const { return base_y_; }

 private:
  int& at(int x, int y) { return pref_[x + y * (w_ + 1)]; }
  int cat(int x, int y) const { return pref_[x + y * (w_ + 1)]; }

  int base_x_, base_y_, w_, h_;
  std::vector<int> pref_;
};

std::vector<Vertex> unique_boundary_vertices(const Polyomino& p) {
  std::vector<Vertex> vs = p.boundary_cycle();
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

}  // namespace

std::pair<int, Cell> compute_depth(const Polyomino& p) {
  std::vector<int> sources;
  for (int i = 0; i < p.area(); ++i)
    if (p.is_boundary_cell(i)) sources.push_back(i);
  std::vector<int> dist = p.bfs_distances(sources);
  int mu = 0;
  Cell witness = p.cell(0);
  for (int i = 0; i < p.area(); ++i)
    if (dist[i] > mu) {
      mu = dist[i];
      witness = p.cell(i);
    }
  return {mu, witness};
}

std::pair<int, std::optional<Cut>> compute_bottleneck(const Polyomino& p) {
  const int vw = p.width() + 1, vh = p.height() + 1;
  auto vindex = [&](Vertex v) {
    return (v.x - p.min_x()) + (v.y - p.min_y()) * vw;
  };
  const std::vector<Vertex> boundary = unique_boundary_vertices(p);

  int best = p.area() + 1;
  std::optional<Cut> witness;

  std::vector<int> dist(vw * vh);
  std::vector<int> parent(vw * vh);
  for (const Vertex& u : boundary) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent.begin(), parent.end(), -1);
    std::queue<Vertex> queue;
    dist[vindex(u)] = 0;
    queue.push(u);
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop();
      if (dist[vindex(v)] >= best) break;  // no shorter cut can be found
      if (v != u && p.is_boundary_vertex(v)) continue;  // terminal
      const Vertex nexts[4] = {{v.x + 1, v.y}, {v.x, v.y + 1}, {v.x - 1, v.y}, {v.x, v.y - 1}};
      for (const Vertex& w : nexts) {
        if (!p.is_interior_lattice_edge(v, w)) continue;
        int wi = vindex(w);
        if (dist[wi] >= 0) continue;
        dist[wi] = dist[vindex(v)] + 1;
        parent[wi] = vindex(v);
        queue.push(w);
      }
    }
    for (const Vertex& v : boundary) {
      if (!(u < v)) continue;
      int l = dist[vindex(v)];
      if (l < 1 || l >= best) continue;
      if (l >= p.shorter_boundary_arc(u, v)) continue;  // trivial
      std::vector<Vertex> path;
      for (int i = vindex(v); i >= 0; i = parent[i])
        path.push_back({p.min_x() + i % vw, p.min_y() + i / vw});
      std::reverse(path.begin(), path.end());
      best = l;
      witness = p.make_cut(std::move(path));
    }
  }
  return {best, witness};
}

std::pair<int, std::pair<int, int>> compute_scale(const Polyomino& p) {
  SquareOracle oracle(p);
  for (int c = std::min(p.width(), p.height()); c >= 2; --c) {
    for (int ox = 0; ox < c; ++ox)
      for (int oy = 0; oy < c; ++oy) {
        bool ok = true;
        for (const Cell& cell : p.cells()) {
          int lx = cell.x - p.min_x() - ox, ly = cell.y - p.min_y() - oy;
          int ax = p.min_x() + ox + (lx >= 0 ? lx / c : -((-lx + c - 1) / c)) * c;
          int ay = p.min_y() + oy + (ly >= 0 ? ly / c : -((-ly + c - 1) / c)) * c;
          if (!oracle.full(ax, ay, c)) {
            ok = false;
            break;
          }
        }
        if (ok) return {c, {ox, oy}};
      }
  }
  return {1, {0, 0}};
}

ShapeProfile compute_shape_profile(const Polyomino& p) {
  ShapeProfile profile;
  auto [zeta, cut] = compute_bottleneck(p);
  profile.bottleneck = zeta;
  profile.bottleneck_witness = std::move(cut);
  auto [mu, cell] = compute_depth(p);
  profile.depth = mu;
  profile.depth_witness = cell;
  auto [c, offset] = compute_scale(p);
  profile.scale = c;
  profile.scale_offset_x = offset.first;
  profile.scale_offset_y = offset.second;
  return profile;
}

int Skeleton::tile_index(Cell anchor) const {
  auto it = std::lower_bound(tiles.begin(), tiles.end(), anchor);
  if (it == tiles.end() || *it != anchor) return -1;
  return static_cast<int>(it - tiles.begin());
}

bool Watershed::contains(Cell c) const {
  return std::binary_search(cells.begin(), cells.end(), c);
}

Skeleton compute_skeleton(const Polyomino& p) {
  return compute_skeleton(p, compute_bottleneck(p).first);
}

Skeleton compute_skeleton(const Polyomino& p, int bottleneck) {
  if (bottleneck < 8)
    throw Error(ErrorCode::BottleneckTooSmall, "skeleton needs bottleneck >= 8");
  Skeleton s;
  s.lambda = bottleneck / 4;
  const int lambda = s.lambda;
  SquareOracle oracle(p);

  for (int ay = p.min_y(); ay + lambda <= p.min_y() + p.height(); ay += lambda)
    for (int ax = p.min_x(); ax + lambda <= p.min_x() + p.width(); ax += lambda)
      if (oracle.full(ax, ay, lambda)) s.tiles.push_back({ax, ay});
  std::sort(s.tiles.begin(), s.tiles.end());
  if (s.tiles.empty())
    throw Error(ErrorCode::SkeletonInvariantViolation, "no aligned tile fits");

  s.tile_dual.resize(s.tiles.size());
  for (size_t i = 0; i < s.tiles.size(); ++i) {
    Cell t = s.tiles[i];
    const Cell nbrs[4] = {{t.x + lambda, t.y}, {t.x - lambda, t.y},
                          {t.x, t.y + lambda}, {t.x, t.y - lambda}};
    for (const Cell& nb : nbrs) {
      int j = s.tile_index(nb);
      if (j >= 0) s.tile_dual[i].push_back(j);
    }
  }

  // Connectivity of the tile adjacency graph.
  std::vector<char> seen(s.tiles.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j : s.tile_dual[i])
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
  }
  if (reached != s.tiles.size())
    throw Error(ErrorCode::SkeletonInvariantViolation, "skeleton tiles disconnected");

  // Every 2lambda square inside P (any position) must contain a tile.
  for (int y = p.min_y(); y + 2 * lambda <= p.min_y() + p.height(); ++y)
    for (int x = p.min_x(); x + 2 * lambda <= p.min_x() + p.width(); ++x) {
      if (!oracle.full(x, y, 2 * lambda)) continue;
      bool found = false;
      int ax0 = p.min_x() + ((x - p.min_x() + lambda - 1) / lambda) * lambda;
      for (int ax = ax0; ax <= x + lambda && !found; ax += lambda) {
        int ay0 = p.min_y() + ((y - p.min_y() + lambda - 1) / lambda) * lambda;
        for (int ay = ay0; ay <= y + lambda && !found; ay += lambda)
          found = s.tile_index({ax, ay}) >= 0;
      }
      if (!found)
        throw Error(ErrorCode::SkeletonInvariantViolation,
                    "uncovered 2-lambda square");
    }
  return s;
}

Watershed compute_watershed(const Polyomino& p, const Skeleton& s, Cell tile) {
  if (s.tile_index(tile) < 0)
    throw Error(ErrorCode::TileNotInSkeleton, "tile is not a skeleton tile");
  const int lambda = s.lambda;
  SquareOracle oracle(p);

  std::vector<Cell> cells;
  bool any = false;
  for (int x = tile.x - lambda; x <= tile.x; ++x)
    for (int y = tile.y - lambda; y <= tile.y; ++y) {
      if (!oracle.full(x, y, 2 * lambda)) continue;
      any = true;
      for (int cx = x; cx < x + 2 * lambda; ++cx)
        for (int cy = y; cy < y + 2 * lambda; ++cy) cells.push_back({cx, cy});
    }
  if (!any)
    throw Error(ErrorCode::SkeletonInvariantViolation,
                "no 2-lambda square contains the tile");
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  // HV-convexity and the 3-lambda bounding box.
  std::map<int, std::pair<int, int>> col_range, row_range;
  std::map<int, int> col_count, row_count;
  for (const Cell& c : cells) {
    auto [ci, inserted] = col_range.try_emplace(c.x, c.y, c.y);
    ci->second.first = std::min(ci->second.first, c.y);
    ci->second.second = std::max(ci->second.second, c.y);
    (void)inserted;
    auto [ri, r_ins] = row_range.try_emplace(c.y, c.x, c.x);
    ri->second.first = std::min(ri->second.first, c.x);
    ri->second.second = std::max(ri->second.second, c.x);
    (void)r_ins;
    ++col_count[c.x];
    ++row_count[c.y];
  }
  for (const auto& [x, range] : col_range)
    if (col_count[x] != range.second - range.first + 1)
      throw Error(ErrorCode::SkeletonInvariantViolation, "watershed column has a gap");
  for (const auto& [y, range] : row_range)
    if (row_count[y] != range.second - range.first + 1)
      throw Error(ErrorCode::SkeletonInvariantViolation, "watershed row has a gap");
  int bb_w = col_range.rbegin()->first - col_range.begin()->first + 1;
  int bb_h = row_range.rbegin()->first - row_range.begin()->first + 1;
  if (bb_w > 3 * lambda || bb_h > 3 * lambda)
    throw Error(ErrorCode::SkeletonInvariantViolation, "watershed exceeds 3-lambda box");

  return Watershed{tile, std::move(cells)};
}

std::vector<Cell> square_cover_2lambda(const Polyomino& p) {
  return square_cover_2lambda(p, compute_bottleneck(p).first);
}

std::vector<Cell> square_cover_2lambda(const Polyomino& p, int bottleneck) {
  if (bottleneck < 8)
    throw Error(ErrorCode::BottleneckTooSmall, "square cover needs bottleneck >= 8");
  const int side = 2 * (bottleneck / 4);
  SquareOracle oracle(p);
  std::vector<Cell> anchors;
  for (int y = p.min_y(); y + side <= p.min_y() + p.height(); ++y)
    for (int x = p.min_x(); x + side <= p.min_x() + p.width(); ++x)
      if (oracle.full(x, y, side)) anchors.push_back({x, y});
  if (anchors.empty())
    throw Error(ErrorCode::Internal, "no 2-lambda square fits");

  std::sort(anchors.begin(), anchors.end());
  std::vector<char> seen(anchors.size(), 0);
  auto find = [&](Cell c) {
    auto it = std::lower_bound(anchors.begin(), anchors.end(), c);
    if (it == anchors.end() || *it != c) return -1;
    return static_cast<int>(it - anchors.begin());
  };
  std::vector<int> stack{0};
  seen[0] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    Cell a = anchors[stack.back()];
    stack.pop_back();
    const Cell nbrs[4] = {{a.x + 1, a.y}, {a.x - 1, a.y}, {a.x, a.y + 1}, {a.x, a.y - 1}};
    for (const Cell& nb : nbrs) {
      int j = find(nb);
      if (j >= 0 && !seen[j]) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  if (reached != anchors.size())
    throw Error(ErrorCode::Internal, "square cover placements disconnected");
  return anchors;
}

std::string shape_profile_to_text(const ShapeProfile& profile) {
  std::ostringstream out;
  out << "bottleneck " << profile.bottleneck << "\n";
  if (profile.bottleneck_witness) {
    out << "bottleneck_cut";
    for (const Vertex& v : profile.bottleneck_witness->path)
      out << ' ' << v.x << ',' << v.y;
    out << "\n";
  }
  out << "depth " << profile.depth << "\n";
  out << "depth_witness " << profile.depth_witness.x << ',' << profile.depth_witness.y
      << "\n";
  out << "scale " << profile.scale << "\n";
  out << "scale_offset " << profile.scale_offset_x << ',' << profile.scale_offset_y
      << "\n";
  return out.str();
}

}  // namespace mapf

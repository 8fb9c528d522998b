#include "mapf/geometry.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>

namespace mapf {

namespace {

// Direction encoding: 0=+x, 1=+y, 2=-x, 3=-y.
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

}  // namespace

void Polyomino::build_index() {
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  if (cells_.empty()) throw Error(ErrorCode::EmptyDomain, "polyomino has no cells");

  min_x_ = cells_[0].x;
  min_y_ = cells_[0].y;
  int max_x = cells_[0].x, max_y = cells_[0].y;
  for (const Cell& c : cells_) {
    min_x_ = std::min(min_x_, c.x);
    min_y_ = std::min(min_y_, c.y);
    max_x = std::max(max_x, c.x);
    max_y = std::max(max_y, c.y);
  }
  width_ = max_x - min_x_ + 1;
  height_ = max_y - min_y_ + 1;

  grid_.assign(static_cast<size_t>(width_) * height_, -1);
  for (size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    grid_[static_cast<size_t>(c.y - min_y_) * width_ + (c.x - min_x_)] =
        static_cast<int32_t>(i);
  }
}

bool Polyomino::contains(Cell c) const { return index_of(c) >= 0; }

int Polyomino::index_of(Cell c) const {
  if (c.x < min_x_ || c.y < min_y_ || c.x >= min_x_ + width_ || c.y >= min_y_ + height_)
    return -1;
  return grid_[static_cast<size_t>(c.y - min_y_) * width_ + (c.x - min_x_)];
}

void Polyomino::neighbors(int index, int out[4], int& count) const {
  count = 0;
  Cell c = cells_[index];
  for (int d = 0; d < 4; ++d) {
    int j = index_of({c.x + kDx[d], c.y + kDy[d]});
    if (j >= 0) out[count++] = j;
  }
}

std::vector<DualEdge> Polyomino::dual_edges() const {
  std::vector<DualEdge> edges;
  for (int i = 0; i < area(); ++i) {
    Cell c = cells_[i];
    int right = index_of({c.x + 1, c.y});
    int up = index_of({c.x, c.y + 1});
    if (right >= 0) edges.push_back({std::min(i, right), std::max(i, right)});
    if (up >= 0) edges.push_back({std::min(i, up), std::max(i, up)});
  }
  return edges;
}

int Polyomino::interior_edge_count() const {
  int count = 0;
  for (const Cell& c : cells_) {
    if (contains({c.x + 1, c.y})) ++count;
    if (contains({c.x, c.y + 1})) ++count;
  }
  return count;
}

Polyomino Polyomino::from_cells(std::vector<Cell> cells) {
  Polyomino p;
  p.cells_ = std::move(cells);
  p.build_index();

  // 4-connectivity of the dual graph.
  std::vector<int> dist = p.bfs_distances({0});
  for (int d : dist)
    if (d < 0) throw Error(ErrorCode::Disconnected, "cells are not 4-connected");

  // Hole-freeness: flood fill the complement from a one-cell margin around
  // the bounding box; every empty cell must be reachable from outside.
  int w = p.width_ + 2, h = p.height_ + 2;
  std::vector<uint8_t> seen(static_cast<size_t>(w) * h, 0);
  std::deque<std::pair<int, int>> queue;  // margin coordinates
  queue.emplace_back(0, 0);
  seen[0] = 1;
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      int nx = x + kDx[d], ny = y + kDy[d];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      size_t idx = static_cast<size_t>(ny) * w + nx;
      if (seen[idx]) continue;
      if (p.contains({nx - 1 + p.min_x_, ny - 1 + p.min_y_})) continue;
      seen[idx] = 1;
      queue.emplace_back(nx, ny);
    }
  }
  for (int y = 0; y < p.height_; ++y)
    for (int x = 0; x < p.width_; ++x) {
      if (p.grid_[static_cast<size_t>(y) * p.width_ + x] >= 0) continue;
      if (!seen[static_cast<size_t>(y + 1) * w + (x + 1)])
        throw Error(ErrorCode::HasHole, "complement is not connected to the outside");
    }
  return p;
}

Polyomino Polyomino::parse(std::string_view text) {
  std::vector<std::string> rows;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      rows.push_back(current);
      current.clear();
    } else if (ch == '\r') {
      continue;
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) rows.push_back(current);

  std::vector<Cell> cells;
  int num_rows = static_cast<int>(rows.size());
  for (int r = 0; r < num_rows; ++r) {
    int y = num_rows - 1 - r;  // first row is topmost
    for (int x = 0; x < static_cast<int>(rows[r].size()); ++x) {
      char ch = rows[r][x];
      if (ch == '#') {
        cells.push_back({x, y});
      } else if (ch != '.') {
        throw Error(ErrorCode::BadCharacter,
                    std::string("unexpected character '") + ch + "'");
      }
    }
  }
  if (cells.empty()) throw Error(ErrorCode::EmptyDomain, "map contains no '#'");
  return from_cells(std::move(cells)).normalized();
}

std::string Polyomino::serialize() const {
  std::string out;
  for (int y = min_y_ + height_ - 1; y >= min_y_; --y) {
    for (int x = min_x_; x < min_x_ + width_; ++x)
      out.push_back(contains({x, y}) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

Polyomino Polyomino::normalized() const {
  if (min_x_ == 0 && min_y_ == 0) return *this;
  std::vector<Cell> shifted;
  shifted.reserve(cells_.size());
  for (const Cell& c : cells_) shifted.push_back({c.x - min_x_, c.y - min_y_});
  return from_cells(std::move(shifted));
}

std::vector<int> Polyomino::bfs_distances(const std::vector<int>& sources) const {
  std::vector<int> dist(cells_.size(), -1);
  std::deque<int> queue;
  for (int s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  int nbr[4], count;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    neighbors(i, nbr, count);
    for (int k = 0; k < count; ++k) {
      if (dist[nbr[k]] < 0) {
        dist[nbr[k]] = dist[i] + 1;
        queue.push_back(nbr[k]);
      }
    }
  }
  return dist;
}

int Polyomino::geodesic_distance(Cell a, Cell b) const {
  int ia = index_of(a), ib = index_of(b);
  if (ia < 0 || ib < 0)
    throw Error(ErrorCode::CellNotInDomain, "geodesic_distance endpoint outside polyomino");
  if (ia == ib) return 0;
  std::vector<int> dist = bfs_distances({ia});
  return dist[ib];
}

const std::vector<Vertex>& Polyomino::boundary_cycle() const {
  if (!boundary_.empty()) return boundary_;

  // Outgoing boundary-directed edges per lattice vertex, interior on the
  // left of the walking direction.
  int vw = width_ + 1, vh = height_ + 1;
  std::vector<uint8_t> out_mask(static_cast<size_t>(vw) * vh, 0);
  auto vidx = [&](int x, int y) { return static_cast<size_t>(y) * vw + x; };
  for (const Cell& c : cells_) {
    int x = c.x - min_x_, y = c.y - min_y_;
    if (!contains({c.x, c.y - 1})) out_mask[vidx(x, y)] |= 1u << 0;          // +x
    if (!contains({c.x + 1, c.y})) out_mask[vidx(x + 1, y)] |= 1u << 1;      // +y
    if (!contains({c.x, c.y + 1})) out_mask[vidx(x + 1, y + 1)] |= 1u << 2;  // -x
    if (!contains({c.x - 1, c.y})) out_mask[vidx(x, y + 1)] |= 1u << 3;      // -y
  }

  // Start at the lexicographically smallest boundary vertex; there the only
  // outgoing edge is the bottom edge of the lex-smallest column cell (+x).
  Vertex start{-1, -1};
  for (int x = 0; x <= width_ && start.x < 0; ++x)
    for (int y = 0; y <= height_; ++y)
      if (out_mask[vidx(x, y)]) {
        start = {x, y};
        break;
      }

  std::vector<Vertex> cycle;
  int x = start.x, y = start.y;
  int dir = 0;  // +x at the global minimum corner
  do {
    cycle.push_back({x + min_x_, y + min_y_});
    x += kDx[dir];
    y += kDy[dir];
    // Continue along the same face: prefer the right turn, then straight,
    // then the left turn.
    uint8_t mask = out_mask[vidx(x, y)];
    int next = -1;
    for (int turn : {3, 0, 1}) {
      int cand = (dir + turn) & 3;
      if (mask & (1u << cand)) {
        next = cand;
        break;
      }
    }
    if (next < 0) throw Error(ErrorCode::Internal, "boundary trace dead end");
    dir = next;
  } while (!(x == start.x && y == start.y));

  boundary_ = std::move(cycle);

  boundary_vertex_mask_.assign(static_cast<size_t>(vw) * vh, 0);
  for (const Vertex& v : boundary_)
    boundary_vertex_mask_[vidx(v.x - min_x_, v.y - min_y_)] = 1;
  return boundary_;
}

bool Polyomino::is_boundary_vertex(Vertex v) const {
  boundary_cycle();
  int x = v.x - min_x_, y = v.y - min_y_;
  if (x < 0 || y < 0 || x > width_ || y > height_) return false;
  return boundary_vertex_mask_[static_cast<size_t>(y) * (width_ + 1) + x] != 0;
}

bool Polyomino::is_boundary_cell(int index) const {
  Cell c = cells_[index];
  for (int d = 0; d < 4; ++d)
    if (!contains({c.x + kDx[d], c.y + kDy[d]})) return true;
  return false;
}

bool Polyomino::is_interior_lattice_edge(Vertex v, Vertex w) const {
  int dx = w.x - v.x, dy = w.y - v.y;
  if (std::abs(dx) + std::abs(dy) != 1) return false;
  if (dx != 0) {  // horizontal edge: cells above and below
    int x = std::min(v.x, w.x);
    return contains({x, v.y}) && contains({x, v.y - 1});
  }
  int y = std::min(v.y, w.y);  // vertical edge: cells left and right
  return contains({v.x, y}) && contains({v.x - 1, y});
}

DualEdge Polyomino::crossed_dual_edge(Vertex v, Vertex w) const {
  int dx = w.x - v.x;
  int a, b;
  if (dx != 0) {
    int x = std::min(v.x, w.x);
    a = index_of({x, v.y});
    b = index_of({x, v.y - 1});
  } else {
    int y = std::min(v.y, w.y);
    a = index_of({v.x, y});
    b = index_of({v.x - 1, y});
  }
  return {std::min(a, b), std::max(a, b)};
}

Cut Polyomino::make_cut(std::vector<Vertex> path) const {
  if (path.size() < 2) throw Error(ErrorCode::InvalidCut, "path too short");
  for (size_t i = 0; i + 1 < path.size(); ++i)
    if (!is_interior_lattice_edge(path[i], path[i + 1]))
      throw Error(ErrorCode::InvalidCut, "path edge is not an interior lattice edge");
  for (size_t i = 0; i < path.size(); ++i)
    for (size_t j = i + 1; j < path.size(); ++j)
      if (path[i] == path[j]) throw Error(ErrorCode::InvalidCut, "path is not simple");
  if (!is_boundary_vertex(path.front()) || !is_boundary_vertex(path.back()))
    throw Error(ErrorCode::InvalidCut, "cut endpoints must lie on the boundary");
  for (size_t i = 1; i + 1 < path.size(); ++i)
    if (is_boundary_vertex(path[i]))
      throw Error(ErrorCode::InvalidCut, "interior path vertex lies on the boundary");

  Cut cut;
  cut.path = std::move(path);
  cut.length = static_cast<int>(cut.path.size()) - 1;
  for (size_t i = 0; i + 1 < cut.path.size(); ++i)
    cut.cut_edges.push_back(crossed_dual_edge(cut.path[i], cut.path[i + 1]));
  std::sort(cut.cut_edges.begin(), cut.cut_edges.end());

  // Removing the cut edges must leave exactly two components.
  std::vector<std::vector<int>> adj(cells_.size());
  for (const DualEdge& e : dual_edges()) {
    if (std::binary_search(cut.cut_edges.begin(), cut.cut_edges.end(), e)) continue;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<int> comp(cells_.size(), -1);
  int num_comps = 0;
  for (size_t s = 0; s < cells_.size(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = num_comps;
    std::deque<int> queue{static_cast<int>(s)};
    while (!queue.empty()) {
      int i = queue.front();
      queue.pop_front();
      for (int j : adj[i])
        if (comp[j] < 0) {
          comp[j] = num_comps;
          queue.push_back(j);
        }
    }
    ++num_comps;
  }
  if (num_comps != 2)
    throw Error(ErrorCode::InvalidCut, "cut does not separate the polyomino into two pieces");
  return cut;
}

int Polyomino::shorter_boundary_arc(Vertex a, Vertex b) const {
  const std::vector<Vertex>& cycle = boundary_cycle();
  int len = static_cast<int>(cycle.size());
  // A pinch vertex appears twice on the cycle; take the best occurrence pair.
  int best = -1;
  for (int i = 0; i < len; ++i) {
    if (!(cycle[i] == a)) continue;
    for (int j = 0; j < len; ++j) {
      if (!(cycle[j] == b)) continue;
      int d = std::abs(i - j);
      int arc = std::min(d, len - d);
      if (best < 0 || arc < best) best = arc;
    }
  }
  if (best < 0)
    throw Error(ErrorCode::InvalidCut, "arc endpoints are not boundary vertices");
  return best;
}

bool Polyomino::is_trivial_cut(const Cut& c) const {
  return shorter_boundary_arc(c.path.front(), c.path.back()) <= c.length;
}

std::pair<Polyomino, Polyomino> Polyomino::split(const Cut& c) const {
  std::vector<std::vector<int>> adj(cells_.size());
  for (const DualEdge& e : dual_edges()) {
    if (std::binary_search(c.cut_edges.begin(), c.cut_edges.end(), e)) continue;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<int> comp(cells_.size(), -1);
  std::deque<int> queue{0};
  comp[0] = 0;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j : adj[i])
      if (comp[j] < 0) {
        comp[j] = 0;
        queue.push_back(j);
      }
  }
  std::vector<Cell> first, second;
  for (size_t i = 0; i < cells_.size(); ++i)
    (comp[i] == 0 ? first : second).push_back(cells_[i]);
  if (first.empty() || second.empty())
    throw Error(ErrorCode::InvalidCut, "cut does not split the polyomino");
  return {from_cells(std::move(first)), from_cells(std::move(second))};
}

}  // namespace mapf

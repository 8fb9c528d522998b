#pragma once

// Test-side helpers: deterministic random polyominoes and an independent
// grid BFS oracle.  Kept separate from the library's generators on purpose.

#include <map>
#include <random>
#include <set>
#include <vector>

#include "mapf/geometry.hpp"
#include "mapf/schedule.hpp"

namespace test_util {

// Random simple polyomino by accretion; retries candidates that would pinch
// off a hole (checked by rebuilding, so this is slow but obviously correct).
inline mapf::Polyomino random_simple_polyomino(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::set<mapf::Cell> cells{{0, 0}};
  constexpr int dx[4] = {1, 0, -1, 0};
  constexpr int dy[4] = {0, 1, 0, -1};
  while (static_cast<int>(cells.size()) < n) {
    std::vector<mapf::Cell> frontier;
    for (const mapf::Cell& c : cells)
      for (int d = 0; d < 4; ++d) {
        mapf::Cell cand{c.x + dx[d], c.y + dy[d]};
        if (!cells.count(cand)) frontier.push_back(cand);
      }
    std::uniform_int_distribution<size_t> pick(0, frontier.size() - 1);
    mapf::Cell cand = frontier[pick(rng)];
    cells.insert(cand);
    std::vector<mapf::Cell> as_vec(cells.begin(), cells.end());
    try {
      (void)mapf::Polyomino::from_cells(as_vec);
    } catch (const mapf::Error&) {
      cells.erase(cand);
    }
  }
  return mapf::Polyomino::from_cells({cells.begin(), cells.end()}).normalized();
}

// Independent BFS oracle over an explicit adjacency map.
inline int oracle_distance(const mapf::Polyomino& p, mapf::Cell a, mapf::Cell b) {
  std::map<mapf::Cell, int> dist;
  std::vector<mapf::Cell> queue{a};
  dist[a] = 0;
  constexpr int dx[4] = {1, 0, -1, 0};
  constexpr int dy[4] = {0, 1, 0, -1};
  for (size_t head = 0; head < queue.size(); ++head) {
    mapf::Cell c = queue[head];
    if (c == b) return dist[c];
    for (int d = 0; d < 4; ++d) {
      mapf::Cell nc{c.x + dx[d], c.y + dy[d]};
      if (p.contains(nc) && !dist.count(nc)) {
        dist[nc] = dist[c] + 1;
        queue.push_back(nc);
      }
    }
  }
  return -1;
}

// Replaces every cell by a k x k block.
inline mapf::Polyomino scaled_up(const mapf::Polyomino& p, int k) {
  std::vector<mapf::Cell> cells;
  for (const mapf::Cell& c : p.cells())
    for (int dx = 0; dx < k; ++dx)
      for (int dy = 0; dy < k; ++dy) cells.push_back({c.x * k + dx, c.y * k + dy});
  return mapf::Polyomino::from_cells(std::move(cells));
}

// Two square chambers joined by a corridor of the given width and length.
inline mapf::Polyomino dumbbell(int chamber, int corridor_w, int corridor_len) {
  std::vector<mapf::Cell> cells;
  for (int x = 0; x < chamber; ++x)
    for (int y = 0; y < chamber; ++y) {
      cells.push_back({x, y});
      cells.push_back({chamber + corridor_len + x, y});
    }
  int cy = (chamber - corridor_w) / 2;
  for (int x = chamber; x < chamber + corridor_len; ++x)
    for (int y = cy; y < cy + corridor_w; ++y) cells.push_back({x, y});
  return mapf::Polyomino::from_cells(std::move(cells));
}

inline mapf::Configuration random_configuration(const mapf::Polyomino& p, unsigned seed) {
  std::vector<int> labels(p.area());
  for (int i = 0; i < p.area(); ++i) labels[i] = i + 1;
  std::mt19937_64 rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);
  return mapf::Configuration::from_labels(std::move(labels));
}

}  // namespace test_util

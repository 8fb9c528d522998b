#include "mapf/primitives.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <queue>

#include "mapf/routing.hpp"

namespace mapf {

namespace {

constexpr int kMaxGadgetCells = 7;

std::vector<Cell> square_cells(Cell anchor) {
  return {{anchor.x, anchor.y},
          {anchor.x, anchor.y + 1},
          {anchor.x + 1, anchor.y},
          {anchor.x + 1, anchor.y + 1}};
}

}  // namespace

int SquareCover::square_index(Cell anchor) const {
  auto it = std::lower_bound(squares.begin(), squares.end(), anchor);
  if (it == squares.end() || *it != anchor) return -1;
  return static_cast<int>(it - squares.begin());
}

ReconfigurabilityResult check_universal_reconfigurability(const Polyomino& p) {
  ReconfigurabilityResult result;
  if (p.area() == 1) {
    // A single cell has a single configuration.
    result.reconfigurable = true;
    return result;
  }

  SquareCover cover;
  for (const Cell& c : p.cells())
    if (p.contains({c.x + 1, c.y}) && p.contains({c.x, c.y + 1}) &&
        p.contains({c.x + 1, c.y + 1}))
      cover.squares.push_back(c);

  std::vector<char> covered(p.area(), 0);
  for (const Cell& a : cover.squares)
    for (const Cell& c : square_cells(a)) covered[p.index_of(c)] = 1;
  for (int i = 0; i < p.area(); ++i)
    if (!covered[i]) {
      result.witness = {ReconfigurabilityWitness::Kind::UncoveredCell, p.cell(i), {}};
      return result;
    }

  // In a reconfigurable polyomino every dual edge lies inside some square
  // of the cover; a violating edge doubles as the cut-edge witness.
  for (const DualEdge& e : p.dual_edges()) {
    Cell u = p.cell(e.a), v = p.cell(e.b);
    Cell lo{std::min(u.x, v.x), std::min(u.y, v.y)};
    Cell hi{std::max(u.x, v.x), std::max(u.y, v.y)};
    bool in_square = false;
    for (int ax = hi.x - 1; ax <= lo.x && !in_square; ++ax)
      for (int ay = hi.y - 1; ay <= lo.y && !in_square; ++ay)
        in_square = cover.square_index({ax, ay}) >= 0;
    if (!in_square) {
      result.witness = {ReconfigurabilityWitness::Kind::EdgeWithoutSquare, u, e};
      return result;
    }
  }

  if (cover.squares.size() == 1) {
    // One lone square only admits rotations of its four agents.
    result.witness = {ReconfigurabilityWitness::Kind::LoneSquare, cover.squares[0], {}};
    return result;
  }

  cover.intersection_graph.resize(cover.squares.size());
  for (size_t i = 0; i < cover.squares.size(); ++i) {
    Cell a = cover.squares[i];
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        int j = cover.square_index({a.x + dx, a.y + dy});
        if (j >= 0) cover.intersection_graph[i].push_back(j);
      }
  }
  // Coverage of every dual edge forces connectivity; verify anyway.
  std::vector<char> seen(cover.squares.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j : cover.intersection_graph[i])
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
  }
  if (reached != cover.squares.size())
    throw Error(ErrorCode::Internal, "covered domain with disconnected square graph");

  result.reconfigurable = true;
  result.cover = std::move(cover);
  return result;
}

// ---------------------------------------------------------------------------
// Gadget tables.
//
// The four shapes of two overlapping 2x2 squares (up to translation) have at
// most 7 cells, so their configuration graphs are tiny.  We explore each one
// once by BFS from the identity over all cycle rotations, and read optimal
// move sequences for arbitrary relabelings off the predecessor links.

namespace {

struct GadgetTable {
  Polyomino shape = Polyomino::from_cells({{0, 0}});  // canonical coordinates
  int k = 0;
  std::vector<Transformation> generators;
  std::vector<std::array<int8_t, kMaxGadgetCells>> generator_src;
  std::vector<int32_t> pred_state;
  std::vector<int16_t> pred_generator;
  int max_distance = 0;
};

int factorial(int k) {
  int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

int encode_state(const std::array<int8_t, kMaxGadgetCells>& s, int k) {
  int code = 0;
  for (int i = 0; i < k; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < k; ++j)
      if (s[j] < s[i]) ++smaller;
    code = code * (k - i) + smaller;
  }
  return code;
}

void decode_state(int code, int k, std::array<int8_t, kMaxGadgetCells>& s) {
  std::array<int, kMaxGadgetCells> digits{};
  for (int i = k - 1; i >= 0; --i) {
    digits[i] = code % (k - i);
    code /= (k - i);
  }
  std::vector<int8_t> pool;
  for (int i = 0; i < k; ++i) pool.push_back(static_cast<int8_t>(i));
  for (int i = 0; i < k; ++i) {
    s[i] = pool[digits[i]];
    pool.erase(pool.begin() + digits[i]);
  }
}

// All simple cycles of the dual graph, each contributing two rotation
// directions.  Canonical form: smallest vertex first, second < last.
void enumerate_cycles(const Polyomino& shape, std::vector<std::vector<int>>& cycles) {
  int k = shape.area();
  std::vector<std::vector<int>> adj(k);
  for (const DualEdge& e : shape.dual_edges()) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<int> path;
  std::vector<char> used(k, 0);
  std::function<void(int, int)> dfs = [&](int start, int v) {
    for (int w : adj[v]) {
      if (w == start && path.size() >= 4) {
        if (path[1] < path.back()) cycles.push_back(path);
        continue;
      }
      if (w <= start || used[w]) continue;
      used[w] = 1;
      path.push_back(w);
      dfs(start, w);
      path.pop_back();
      used[w] = 0;
    }
  };
  for (int start = 0; start < k; ++start) {
    path = {start};
    std::fill(used.begin(), used.end(), 0);
    used[start] = 1;
    dfs(start, start);
  }
}

GadgetTable build_gadget_table(Cell offset) {
  GadgetTable table;
  std::vector<Cell> cells = square_cells({0, 0});
  for (const Cell& c : square_cells(offset)) cells.push_back(c);
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  table.shape = Polyomino::from_cells(cells);
  table.k = table.shape.area();

  std::vector<std::vector<int>> cycles;
  enumerate_cycles(table.shape, cycles);
  for (const std::vector<int>& cycle : cycles) {
    for (int dir = 0; dir < 2; ++dir) {
      std::vector<int> ordered = cycle;
      if (dir == 1) std::reverse(ordered.begin(), ordered.end());
      Transformation t;
      std::array<int8_t, kMaxGadgetCells> src{};
      for (int i = 0; i < table.k; ++i) src[i] = static_cast<int8_t>(i);
      int len = static_cast<int>(ordered.size());
      for (int i = 0; i < len; ++i) {
        int from = ordered[i], to = ordered[(i + 1) % len];
        t.moves.push_back({table.shape.cell(from), table.shape.cell(to)});
        src[to] = static_cast<int8_t>(from);
      }
      table.generators.push_back(std::move(t));
      table.generator_src.push_back(src);
    }
  }

  int states = factorial(table.k);
  table.pred_state.assign(states, -1);
  table.pred_generator.assign(states, -1);
  std::vector<int> dist(states, -1);
  std::array<int8_t, kMaxGadgetCells> identity{};
  for (int i = 0; i < table.k; ++i) identity[i] = static_cast<int8_t>(i);
  int root = encode_state(identity, table.k);
  dist[root] = 0;
  std::queue<int> queue;
  queue.push(root);
  std::array<int8_t, kMaxGadgetCells> state{}, next{};
  while (!queue.empty()) {
    int code = queue.front();
    queue.pop();
    decode_state(code, table.k, state);
    for (size_t g = 0; g < table.generator_src.size(); ++g) {
      for (int i = 0; i < table.k; ++i) next[i] = state[table.generator_src[g][i]];
      int ncode = encode_state(next, table.k);
      if (dist[ncode] >= 0) continue;
      dist[ncode] = dist[code] + 1;
      table.max_distance = std::max(table.max_distance, dist[ncode]);
      table.pred_state[ncode] = code;
      table.pred_generator[ncode] = static_cast<int16_t>(g);
      queue.push(ncode);
    }
  }
  for (int s = 0; s < states; ++s)
    if (dist[s] < 0)
      throw Error(ErrorCode::Internal, "gadget region is not fully reconfigurable");
  return table;
}

int offset_code(Cell offset) {
  if (offset == Cell{0, 1}) return 0;
  if (offset == Cell{1, 0}) return 1;
  if (offset == Cell{1, 1}) return 2;
  if (offset == Cell{1, -1}) return 3;
  return -1;
}

const GadgetTable& gadget_table(int code) {
  static const std::array<GadgetTable, 4> tables = {
      build_gadget_table({0, 1}), build_gadget_table({1, 0}),
      build_gadget_table({1, 1}), build_gadget_table({1, -1})};
  return tables[code];
}

// Schedule realizing the given state (token i ends where state says) in the
// region, translated from canonical to absolute coordinates.
Schedule realize_state(const GadgetRegion& region,
                       const std::array<int8_t, kMaxGadgetCells>& target_state) {
  Cell lo = std::min(region.square_a, region.square_b);
  const GadgetTable& table = gadget_table(
      offset_code({std::max(region.square_a, region.square_b).x - lo.x,
                   std::max(region.square_a, region.square_b).y - lo.y}));
  int code = encode_state(target_state, table.k);
  std::vector<int> generator_chain;
  std::array<int8_t, kMaxGadgetCells> identity{};
  for (int i = 0; i < table.k; ++i) identity[i] = static_cast<int8_t>(i);
  int root = encode_state(identity, table.k);
  while (code != root) {
    generator_chain.push_back(table.pred_generator[code]);
    code = table.pred_state[code];
  }
  std::reverse(generator_chain.begin(), generator_chain.end());

  Schedule s;
  for (int g : generator_chain) {
    Transformation t = table.generators[g];
    for (Move& m : t.moves) {
      m.from.x += lo.x;
      m.from.y += lo.y;
      m.to.x += lo.x;
      m.to.y += lo.y;
    }
    s.steps.push_back(std::move(t));
  }
  return s;
}

}  // namespace

GadgetRegion make_gadget_region(Cell square_a, Cell square_b) {
  Cell lo = std::min(square_a, square_b), hi = std::max(square_a, square_b);
  Cell offset{hi.x - lo.x, hi.y - lo.y};
  if (offset_code(offset) < 0)
    throw Error(ErrorCode::BadParameters, "squares do not overlap");
  std::vector<Cell> cells = square_cells(square_a);
  for (const Cell& c : square_cells(square_b)) cells.push_back(c);
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  GadgetRegion region;
  region.cells = Polyomino::from_cells(std::move(cells));
  region.square_a = square_a;
  region.square_b = square_b;
  region.overlap_two = region.cells.area() == 6;
  return region;
}

Schedule gadget_swap(const GadgetRegion& region, const Configuration& c,
                     std::pair<int, int> labels) {
  if (labels.first == labels.second) return {};
  int n = region.cells.area();
  if (labels.first < 1 || labels.first > n || labels.second < 1 || labels.second > n)
    throw Error(ErrorCode::LabelsOutsideRegion, "label is not in the gadget region");
  int a = c.cell_of(labels.first);
  int b = c.cell_of(labels.second);
  std::array<int8_t, kMaxGadgetCells> target{};
  for (int i = 0; i < n; ++i) target[i] = static_cast<int8_t>(i);
  std::swap(target[a], target[b]);
  return realize_state(region, target);
}

Schedule gadget_permutation(const GadgetRegion& region, const std::vector<int>& perm) {
  int n = region.cells.area();
  if (static_cast<int>(perm.size()) != n)
    throw Error(ErrorCode::BadParameters, "permutation size mismatch");
  // Token at cell i ends at cell perm[i], so the final state holds token
  // perm^{-1}(j) at cell j.
  std::array<int8_t, kMaxGadgetCells> target{};
  for (int i = 0; i < n; ++i) target[perm[i]] = static_cast<int8_t>(i);
  return realize_state(region, target);
}

Schedule realize_matching(const Polyomino& p, const SquareCover& cover,
                          const std::vector<DualEdge>& matching) {
  if (matching.empty()) return {};
  std::vector<char> used(p.area(), 0);
  for (const DualEdge& e : matching) {
    if (e.a < 0 || e.b < 0 || e.a >= p.area() || e.b >= p.area() || e.a >= e.b)
      throw Error(ErrorCode::NotAMatching, "bad dual edge");
    Cell u = p.cell(e.a), v = p.cell(e.b);
    if (std::abs(u.x - v.x) + std::abs(u.y - v.y) != 1)
      throw Error(ErrorCode::NotAMatching, "edge endpoints are not adjacent");
    if (used[e.a] || used[e.b])
      throw Error(ErrorCode::NotAMatching, "matching edges share a cell");
    used[e.a] = used[e.b] = 1;
  }

  // Pick a deterministic gadget region for each edge: the lex-smallest
  // square containing both endpoints plus its lex-smallest overlap partner.
  struct RegionJob {
    Cell lo, hi;                  // square anchors
    std::vector<DualEdge> edges;  // edges swapped inside this region
  };
  std::map<std::pair<Cell, Cell>, RegionJob> regions;
  for (const DualEdge& e : matching) {
    Cell u = p.cell(e.a), v = p.cell(e.b);
    Cell clo{std::min(u.x, v.x), std::min(u.y, v.y)};
    Cell chi{std::max(u.x, v.x), std::max(u.y, v.y)};
    int s1 = -1;
    for (int ax = chi.x - 1; ax <= clo.x && s1 < 0; ++ax)
      for (int ay = chi.y - 1; ay <= clo.y && s1 < 0; ++ay)
        s1 = cover.square_index({ax, ay});
    if (s1 < 0)
      throw Error(ErrorCode::NotReconfigurable, "matched edge lies in no square");
    if (cover.intersection_graph.empty() || cover.intersection_graph[s1].empty())
      throw Error(ErrorCode::NotReconfigurable, "square has no overlap partner");
    int s2 = *std::min_element(cover.intersection_graph[s1].begin(),
                               cover.intersection_graph[s1].end());
    Cell a = cover.squares[s1], b = cover.squares[s2];
    std::pair<Cell, Cell> key{std::min(a, b), std::max(a, b)};
    RegionJob& job = regions.try_emplace(key, RegionJob{key.first, key.second, {}})
                         .first->second;
    job.edges.push_back(e);
  }

  // 36 classes: square-pair orientation times the lex-smaller anchor mod 3.
  std::map<std::array<int, 3>, std::vector<const RegionJob*>> classes;
  for (const auto& [key, job] : regions) {
    Cell offset{job.hi.x - job.lo.x, job.hi.y - job.lo.y};
    int orient = offset_code(offset);
    classes[{orient, ((job.lo.x % 3) + 3) % 3, ((job.lo.y % 3) + 3) % 3}].push_back(&job);
  }

  Schedule out;
  for (const auto& [cls, jobs] : classes) {
    std::vector<std::pair<std::vector<int>, Schedule>> parts;
    for (const RegionJob* job : jobs) {
      GadgetRegion region = make_gadget_region(job->lo, job->hi);
      std::vector<int> perm(region.cells.area());
      for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
      for (const DualEdge& e : job->edges) {
        int u = region.cells.index_of(p.cell(e.a));
        int v = region.cells.index_of(p.cell(e.b));
        if (u < 0 || v < 0)
          throw Error(ErrorCode::Internal, "matched edge escapes its region");
        std::swap(perm[u], perm[v]);
      }
      std::vector<int> indices;
      for (const Cell& c : region.cells.cells()) {
        int idx = p.index_of(c);
        if (idx < 0)
          throw Error(ErrorCode::NotReconfigurable, "gadget region leaves the domain");
        indices.push_back(idx);
      }
      parts.emplace_back(std::move(indices), gadget_permutation(region, perm));
    }
    out = concat(std::move(out), merge_parallel(parts, p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interval routing on rectangles and HV-convex pieces.

bool is_hv_convex(const Polyomino& p) {
  std::map<int, std::pair<int, int>> cols, rows;
  std::map<int, int> col_n, row_n;
  for (const Cell& c : p.cells()) {
    auto [ci, cn] = cols.try_emplace(c.x, c.y, c.y);
    ci->second.first = std::min(ci->second.first, c.y);
    ci->second.second = std::max(ci->second.second, c.y);
    (void)cn;
    auto [ri, rn] = rows.try_emplace(c.y, c.x, c.x);
    ri->second.first = std::min(ri->second.first, c.x);
    ri->second.second = std::max(ri->second.second, c.x);
    (void)rn;
    ++col_n[c.x];
    ++row_n[c.y];
  }
  for (const auto& [x, r] : cols)
    if (col_n[x] != r.second - r.first + 1) return false;
  for (const auto& [y, r] : rows)
    if (row_n[y] != r.second - r.first + 1) return false;
  return true;
}

namespace {

// Odd-even transposition on a set of disjoint lines.  Each line is a list of
// cell indices in path order plus the target rank of the token currently at
// each position.  Emits per-round swap matchings (as dual edges of p).
void odd_even_rounds(const Polyomino&, std::vector<std::vector<int>> line_cells,
                     std::vector<std::vector<int>> line_ranks,
                     std::vector<std::vector<DualEdge>>& rounds) {
  size_t max_len = 0;
  for (const auto& line : line_cells) max_len = std::max(max_len, line.size());
  for (size_t pass = 0; pass <= max_len + 1; ++pass) {
    bool all_sorted = true;
    for (const auto& ranks : line_ranks)
      if (!std::is_sorted(ranks.begin(), ranks.end())) all_sorted = false;
    if (all_sorted) return;
    std::vector<DualEdge> round;
    int parity = static_cast<int>(pass % 2);
    for (size_t li = 0; li < line_cells.size(); ++li) {
      auto& ranks = line_ranks[li];
      const auto& cells = line_cells[li];
      for (size_t j = parity; j + 1 < cells.size(); j += 2)
        if (ranks[j] > ranks[j + 1]) {
          std::swap(ranks[j], ranks[j + 1]);
          round.push_back({std::min(cells[j], cells[j + 1]),
                           std::max(cells[j], cells[j + 1])});
        }
    }
    if (!round.empty()) rounds.push_back(std::move(round));
  }
  throw Error(ErrorCode::Internal, "odd-even transposition failed to converge");
}

struct IntervalRange {
  int lo = 0, hi = -1;
  bool contains(int v) const { return v >= lo && v <= hi; }
};

// Three-phase interval routing: permute within columns to assigned rows,
// along rows to destination columns, within columns to destination rows.
// Returns nothing when the row-assignment matching is infeasible.
std::optional<MatchingSequence> interval_route(const Polyomino& piece,
                                               const Configuration& c,
                                               const Configuration& target) {
  const int n = piece.area();
  std::map<int, IntervalRange> cols, rows;
  for (const Cell& cell : piece.cells()) {
    auto& col = cols[cell.x];
    if (col.hi < col.lo) col = {cell.y, cell.y};
    col.lo = std::min(col.lo, cell.y);
    col.hi = std::max(col.hi, cell.y);
    auto& row = rows[cell.y];
    if (row.hi < row.lo) row = {cell.x, cell.x};
    row.lo = std::min(row.lo, cell.x);
    row.hi = std::max(row.hi, cell.x);
  }

  struct Token {
    int src = 0;   // cell index
    int dst = 0;   // cell index
    int row = -1;  // assigned intermediate row
  };
  std::vector<Token> tokens(n);
  for (int i = 0; i < n; ++i) tokens[i] = {i, target.cell_of(c.label_at(i)), -1};

  auto eligible = [&](const Token& t) {
    Cell s = piece.cell(t.src), d = piece.cell(t.dst);
    return IntervalRange{std::max(cols[s.x].lo, cols[d.x].lo),
                         std::min(cols[s.x].hi, cols[d.x].hi)};
  };

  // Row assignment: per row, a maximum matching between source and target
  // columns over the still-unassigned eligible tokens.
  int min_row = rows.begin()->first, max_row = rows.rbegin()->first;
  std::vector<std::vector<int>> tokens_by_src_col_x;  // filled per row below
  int assigned = 0;
  for (int r = min_row; r <= max_row; ++r) {
    // Eligible unassigned tokens grouped by source column.
    std::map<int, std::vector<int>> by_src;
    for (int i = 0; i < n; ++i) {
      if (tokens[i].row >= 0) continue;
      if (eligible(tokens[i]).contains(r)) by_src[piece.cell(tokens[i].src).x].push_back(i);
    }
    // Kuhn's matching: source columns to destination columns.
    std::map<int, int> match_dst;  // dest col -> token index
    std::function<bool(int, std::map<int, char>&)> try_col =
        [&](int src_x, std::map<int, char>& visited) {
          for (int ti : by_src[src_x]) {
            int dst_x = piece.cell(tokens[ti].dst).x;
            if (visited.count(dst_x)) continue;
            visited[dst_x] = 1;
            auto it = match_dst.find(dst_x);
            if (it == match_dst.end() ||
                try_col(piece.cell(tokens[it->second].src).x, visited)) {
              match_dst[dst_x] = ti;
              return true;
            }
          }
          return false;
        };
    for (const auto& [src_x, list] : by_src) {
      std::map<int, char> visited;
      try_col(src_x, visited);
    }
    for (const auto& [dst_x, ti] : match_dst) {
      tokens[ti].row = r;
      ++assigned;
    }
  }
  if (assigned != n) return std::nullopt;

  MatchingSequence seq;
  // Phase 1: within each column, order tokens by assigned row.
  auto column_lines = [&](auto rank_of) {
    std::vector<std::vector<int>> line_cells, line_ranks;
    for (const auto& [x, range] : cols) {
      std::vector<int> cells, ranks;
      for (int y = range.lo; y <= range.hi; ++y) cells.push_back(piece.index_of({x, y}));
      for (int idx : cells) ranks.push_back(rank_of(idx));
      line_cells.push_back(std::move(cells));
      line_ranks.push_back(std::move(ranks));
    }
    return std::pair{line_cells, line_ranks};
  };

  std::vector<int> token_at(n);  // cell index -> token id
  for (int i = 0; i < n; ++i) token_at[i] = i;

  auto run_phase = [&](std::vector<std::vector<int>> line_cells,
                       std::vector<std::vector<int>> line_ranks) {
    size_t before = seq.rounds.size();
    odd_even_rounds(piece, line_cells, std::move(line_ranks), seq.rounds);
    for (size_t ri = before; ri < seq.rounds.size(); ++ri)
      for (const DualEdge& e : seq.rounds[ri]) std::swap(token_at[e.a], token_at[e.b]);
    (void)line_cells;
  };

  {
    auto [lc, lr] = column_lines([&](int idx) { return tokens[token_at[idx]].row; });
    run_phase(lc, lr);
  }
  // Phase 2: within each row, order by destination column.
  {
    std::vector<std::vector<int>> line_cells, line_ranks;
    for (const auto& [y, range] : rows) {
      std::vector<int> cells, ranks;
      for (int x = range.lo; x <= range.hi; ++x) cells.push_back(piece.index_of({x, y}));
      for (int idx : cells) ranks.push_back(piece.cell(tokens[token_at[idx]].dst).x);
      line_cells.push_back(std::move(cells));
      line_ranks.push_back(std::move(ranks));
    }
    run_phase(line_cells, line_ranks);
  }
  // Phase 3: within each column, order by destination row.
  {
    auto [lc, lr] =
        column_lines([&](int idx) { return piece.cell(tokens[token_at[idx]].dst).y; });
    run_phase(lc, lr);
  }

  for (int i = 0; i < n; ++i)
    if (tokens[token_at[i]].dst != i)
      throw Error(ErrorCode::Internal, "interval routing missed its target");
  return seq;
}

}  // namespace

Schedule sort_rectangle(const Polyomino& rect, const Configuration& c,
                        const Configuration& target) {
  if (rect.width() < 2 || rect.height() < 2)
    throw Error(ErrorCode::DegenerateRectangle, "rectangle side below 2");
  if (rect.area() != rect.width() * rect.height())
    throw Error(ErrorCode::BadParameters, "domain is not a rectangle");
  if (c == target) return {};

  ReconfigurabilityResult rec = check_universal_reconfigurability(rect);
  if (!rec.reconfigurable)  // only the lone 2x2 square
    throw Error(ErrorCode::NotReconfigurable, "rectangle admits only rotations");
  std::optional<MatchingSequence> seq = interval_route(rect, c, target);
  if (!seq)
    throw Error(ErrorCode::Internal, "rectangle interval routing infeasible");
  return compile_matching_sequence(rect, rec.cover, *seq);
}

Schedule route_convex_piece(const Polyomino& piece, const Configuration& c,
                            const Configuration& target) {
  if (!is_hv_convex(piece))
    throw Error(ErrorCode::NotHVConvex, "piece has a row or column gap");
  ReconfigurabilityResult rec = check_universal_reconfigurability(piece);
  if (!rec.reconfigurable)
    throw Error(ErrorCode::NotReconfigurable, "piece is not reconfigurable");
  if (c == target) return {};

  std::optional<MatchingSequence> seq = interval_route(piece, c, target);
  if (!seq) {
    // Interval assignment infeasible; route on a spanning tree instead.
    std::vector<DualEdge> tree;
    std::vector<char> seen(piece.area(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      int nbr[4], cnt;
      piece.neighbors(i, nbr, cnt);
      for (int j = 0; j < cnt; ++j)
        if (!seen[nbr[j]]) {
          seen[nbr[j]] = 1;
          tree.push_back({std::min(i, nbr[j]), std::max(i, nbr[j])});
          stack.push_back(nbr[j]);
        }
    }
    seq = tree_route(piece, tree, c, target);
  }
  return compile_matching_sequence(piece, rec.cover, *seq);
}

}  // namespace mapf

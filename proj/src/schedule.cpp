#include "mapf/schedule.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace mapf {

Configuration Configuration::identity(const Polyomino& p) {
  std::vector<int> labels(p.area());
  for (int i = 0; i < p.area(); ++i) labels[i] = i + 1;
  return from_labels(std::move(labels));
}

Configuration Configuration::from_labels(std::vector<int> labels) {
  int n = static_cast<int>(labels.size());
  std::vector<int> positions(n, -1);
  for (int i = 0; i < n; ++i) {
    int l = labels[i];
    if (l < 1 || l > n || positions[l - 1] >= 0)
      throw Error(ErrorCode::BadParameters, "labels are not a permutation of 1..n");
    positions[l - 1] = i;
  }
  Configuration c;
  c.labels_ = std::move(labels);
  c.positions_ = std::move(positions);
  return c;
}

Configuration apply_transformation(const Polyomino& p, const Configuration& c,
                                   const Transformation& t) {
  std::vector<int> move_of_source(p.area(), -1);  // index into non-hold moves
  std::vector<Move> active;
  std::vector<char> is_target(p.area(), 0);
  for (const Move& m : t.moves) {
    int from = p.index_of(m.from);
    int to = p.index_of(m.to);
    if (from < 0 || to < 0)
      throw Error(ErrorCode::CellNotInDomain, "move endpoint outside the polyomino");
    if (m.is_hold()) continue;
    if (std::abs(m.from.x - m.to.x) + std::abs(m.from.y - m.to.y) != 1)
      throw Error(ErrorCode::NotAdjacent, "move between non-adjacent cells");
    if (move_of_source[from] >= 0)
      throw Error(ErrorCode::SourceCollision, "two moves share a source cell");
    if (is_target[to])
      throw Error(ErrorCode::TargetCollision, "two moves share a target cell");
    move_of_source[from] = static_cast<int>(active.size());
    is_target[to] = 1;
    active.push_back(m);
  }

  // All cells are occupied, so the non-hold moves must decompose into
  // vertex-disjoint directed cycles of length >= 3.
  std::vector<char> visited(active.size(), 0);
  for (size_t start = 0; start < active.size(); ++start) {
    if (visited[start]) continue;
    size_t i = start;
    int cycle_len = 0;
    while (true) {
      visited[i] = 1;
      ++cycle_len;
      int next_source = p.index_of(active[i].to);
      int j = move_of_source[next_source];
      if (j < 0)
        throw Error(ErrorCode::BrokenCycle,
                    "move targets an occupied cell whose agent holds");
      if (static_cast<size_t>(j) == start) break;
      if (visited[j])
        throw Error(ErrorCode::BrokenCycle, "moves do not decompose into cycles");
      i = static_cast<size_t>(j);
    }
    if (cycle_len == 2)
      throw Error(ErrorCode::SwapForbidden, "two moves form a forbidden swap");
    if (cycle_len < 3)
      throw Error(ErrorCode::BrokenCycle, "degenerate cycle");
  }

  std::vector<int> labels = c.labels();
  for (const Move& m : active)
    labels[p.index_of(m.to)] = c.label_at(p.index_of(m.from));
  return Configuration::from_labels(std::move(labels));
}

int diameter(const Instance& inst) {
  const Polyomino& p = inst.polyomino;
  int d = 0;
  for (int i = 0; i < p.area(); ++i) {
    std::vector<int> dist = p.bfs_distances({i});
    int label = inst.start.label_at(i);
    d = std::max(d, dist[inst.target.cell_of(label)]);
  }
  return d;
}

ValidationReport validate_schedule(const Instance& inst, const Schedule& s) {
  ValidationReport report;
  report.makespan = s.makespan();
  report.diameter = diameter(inst);

  Configuration current = inst.start;
  for (int i = 0; i < s.makespan(); ++i) {
    try {
      current = apply_transformation(inst.polyomino, current, s.steps[i]);
    } catch (const Error& e) {
      report.valid = false;
      report.failing_step = i;
      report.reason = e.what();
      report.stretch = report.diameter > 0
                           ? static_cast<double>(report.makespan) / report.diameter
                           : report.makespan;
      return report;
    }
  }
  if (current != inst.target) {
    report.valid = false;
    report.reason = "TargetMismatch";
  } else {
    report.valid = true;
  }
  report.stretch = report.diameter > 0
                       ? static_cast<double>(report.makespan) / report.diameter
                       : report.makespan;
  return report;
}

Schedule concat(Schedule a, const Schedule& b) {
  a.steps.insert(a.steps.end(), b.steps.begin(), b.steps.end());
  return a;
}

Schedule merge_parallel(const std::vector<std::pair<std::vector<int>, Schedule>>& parts,
                        const Polyomino& p) {
  std::vector<char> claimed(p.area(), 0);
  for (const auto& [region, sched] : parts) {
    std::vector<char> mine(p.area(), 0);
    for (int i : region) {
      if (claimed[i])
        throw Error(ErrorCode::OverlappingRegions, "merge regions overlap");
      claimed[i] = 1;
      mine[i] = 1;
    }
    for (const Transformation& step : sched.steps)
      for (const Move& m : step.moves) {
        int from = p.index_of(m.from), to = p.index_of(m.to);
        if (from < 0 || to < 0 || !mine[from] || !mine[to])
          throw Error(ErrorCode::CrossRegionMove, "move leaves its merge region");
      }
  }

  Schedule out;
  for (const auto& [region, sched] : parts)
    out.steps.resize(std::max(out.steps.size(), sched.steps.size()));
  for (const auto& [region, sched] : parts)
    for (size_t i = 0; i < sched.steps.size(); ++i)
      out.steps[i].moves.insert(out.steps[i].moves.end(), sched.steps[i].moves.begin(),
                                sched.steps[i].moves.end());
  return out;
}

Schedule compact(Schedule s) {
  Schedule out;
  for (Transformation& step : s.steps) {
    Transformation kept;
    for (const Move& m : step.moves)
      if (!m.is_hold()) kept.moves.push_back(m);
    if (!kept.moves.empty()) out.steps.push_back(std::move(kept));
  }
  return out;
}

std::string schedule_to_text(const Schedule& s) {
  std::ostringstream out;
  out << "makespan " << s.makespan() << "\n";
  for (int i = 0; i < s.makespan(); ++i) {
    out << "t " << i << ":";
    bool first = true;
    for (const Move& m : s.steps[i].moves) {
      if (m.is_hold()) continue;
      out << (first ? " " : ";") << m.from.x << ',' << m.from.y << "->" << m.to.x << ','
          << m.to.y;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

Schedule schedule_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int makespan = 0;
  if (!(in >> word >> makespan) || word != "makespan")
    throw Error(ErrorCode::IoError, "schedule text must start with 'makespan M'");
  Schedule s;
  s.steps.resize(makespan);
  std::string line;
  std::getline(in, line);  // rest of header line
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string t;
    int index = 0;
    char colon = 0;
    if (!(ls >> t >> index >> colon) || t != "t" || colon != ':')
      throw Error(ErrorCode::IoError, "bad step line: " + line);
    if (index < 0 || index >= makespan)
      throw Error(ErrorCode::IoError, "step index out of range");
    std::string rest;
    std::getline(ls, rest);
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t end = rest.find(';', pos);
      std::string token = rest.substr(pos, end == std::string::npos ? end : end - pos);
      pos = end == std::string::npos ? rest.size() : end + 1;
      if (token.find_first_not_of(" \t") == std::string::npos) continue;
      Move m;
      char c1, c2, a1, a2;
      std::istringstream ts(token);
      if (!(ts >> m.from.x >> c1 >> m.from.y >> a1 >> a2 >> m.to.x >> c2 >> m.to.y) ||
          c1 != ',' || c2 != ',' || a1 != '-' || a2 != '>')
        throw Error(ErrorCode::IoError, "bad move token: " + token);
      s.steps[index].moves.push_back(m);
    }
  }
  return s;
}

std::string instance_to_json(const Instance& inst) {
  const Polyomino& p = inst.polyomino;
  nlohmann::json j;
  std::string map = p.serialize();
  std::vector<std::string> rows;
  std::istringstream ms(map);
  std::string line;
  while (std::getline(ms, line)) rows.push_back(line);
  j["map"] = rows;

  auto grid_of = [&](const Configuration& c) {
    std::vector<std::vector<int>> grid;
    for (int y = p.min_y() + p.height() - 1; y >= p.min_y(); --y) {
      std::vector<int> row;
      for (int x = p.min_x(); x < p.min_x() + p.width(); ++x) {
        int i = p.index_of({x, y});
        row.push_back(i < 0 ? 0 : c.label_at(i));
      }
      grid.push_back(std::move(row));
    }
    return grid;
  };
  j["start"] = grid_of(inst.start);
  j["target"] = grid_of(inst.target);
  return j.dump();
}

Instance instance_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::IoError, std::string("bad instance JSON: ") + e.what());
  }
  if (!j.contains("map") || !j.contains("start") || !j.contains("target"))
    throw Error(ErrorCode::IoError, "instance JSON needs map/start/target");

  std::string map;
  try {
    for (const auto& row : j["map"]) map += row.get<std::string>() + "\n";
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("bad map rows: ") + e.what());
  }
  Polyomino p = Polyomino::parse(map);

  auto config_of = [&](const nlohmann::json& grid) {
    std::vector<int> labels(p.area(), 0);
    int num_rows = static_cast<int>(grid.size());
    for (int r = 0; r < num_rows; ++r) {
      const auto& row = grid[r];
      for (int x = 0; x < static_cast<int>(row.size()); ++x) {
        int label = row[x].get<int>();
        int i = p.index_of({x, num_rows - 1 - r});
        if ((i < 0) != (label == 0))
          throw Error(ErrorCode::IoError, "labels do not match the map");
        if (i >= 0) labels[i] = label;
      }
    }
    return Configuration::from_labels(std::move(labels));
  };

  Configuration start, target;
  try {
    start = config_of(j["start"]);
    target = config_of(j["target"]);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("bad label grid: ") + e.what());
  }
  return Instance{std::move(p), std::move(start), std::move(target)};
}

}  // namespace mapf

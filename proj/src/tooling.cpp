#include "mapf/tooling.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "mapf/shape.hpp"

namespace mapf {

namespace {

Configuration mirror_of_chambers(const Polyomino& p, int side, int corridor_len) {
  const int total_w = 2 * side + corridor_len;
  std::vector<int> labels(p.area());
  for (int i = 0; i < p.area(); ++i) {
    Cell c = p.cell(i);
    bool chamber = c.x < side || c.x >= side + corridor_len;
    int j = chamber ? p.index_of({total_w - 1 - c.x, c.y}) : i;
    labels[j] = i + 1;
  }
  return Configuration::from_labels(std::move(labels));
}

}  // namespace

Instance gen_dumbbell(int side, int corridor_width, int corridor_len) {
  if (side < 2 || corridor_width < 1 || corridor_width > side || corridor_len < 1)
    throw Error(ErrorCode::BadParameters, "dumbbell needs s >= 2, 1 <= z <= s, l >= 1");
  std::vector<Cell> cells;
  for (int x = 0; x < side; ++x)
    for (int y = 0; y < side; ++y) {
      cells.push_back({x, y});
      cells.push_back({side + corridor_len + x, y});
    }
  const int cy = (side - corridor_width) / 2;
  for (int x = side; x < side + corridor_len; ++x)
    for (int y = cy; y < cy + corridor_width; ++y) cells.push_back({x, y});
  Polyomino p = Polyomino::from_cells(std::move(cells));
  return {p, Configuration::identity(p), mirror_of_chambers(p, side, corridor_len)};
}

Polyomino gen_random_simple(int n, uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::BadParameters, "need at least one cell");
  std::mt19937_64 rng(seed);
  std::set<Cell> cells{{0, 0}};
  while (static_cast<int>(cells.size()) < n) {
    std::vector<Cell> frontier;
    for (const Cell& c : cells)
      for (Cell cand : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1},
                        Cell{c.x, c.y - 1}})
        if (!cells.count(cand)) frontier.push_back(cand);
    std::uniform_int_distribution<size_t> pick(0, frontier.size() - 1);
    Cell cand = frontier[pick(rng)];
    cells.insert(cand);
    try {
      (void)Polyomino::from_cells({cells.begin(), cells.end()});
    } catch (const Error&) {
      cells.erase(cand);  // would pinch off a hole
    }
  }
  return Polyomino::from_cells({cells.begin(), cells.end()}).normalized();
}

Instance gen_random_instance(const Polyomino& p, uint64_t seed) {
  std::vector<int> labels(p.area());
  for (int i = 0; i < p.area(); ++i) labels[i] = i + 1;
  std::mt19937_64 rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);
  return {p, Configuration::identity(p), Configuration::from_labels(std::move(labels))};
}

Polyomino gen_scaled(const Polyomino& tmpl, int c) {
  if (c < 1) throw Error(ErrorCode::BadParameters, "scale factor must be positive");
  std::vector<Cell> cells;
  for (const Cell& t : tmpl.cells())
    for (int dx = 0; dx < c; ++dx)
      for (int dy = 0; dy < c; ++dy) cells.push_back({t.x * c + dx, t.y * c + dy});
  return Polyomino::from_cells(std::move(cells));
}

void render_svg(const Instance& inst, const Schedule& s, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir);

  const Polyomino& p = inst.polyomino;
  const int cs = 40;  // pixels per cell
  const int top = p.min_y() + p.height() - 1;

  Configuration cur = inst.start;
  for (int frame = 0; frame <= s.makespan(); ++frame) {
    std::set<int> moved;
    if (frame > 0) {
      for (const Move& m : s.steps[frame - 1].moves)
        if (!m.is_hold()) moved.insert(p.index_of(m.to));
      cur = apply_transformation(p, cur, s.steps[frame - 1]);
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << p.width() * cs
        << "\" height=\"" << p.height() * cs << "\">\n";
    for (int i = 0; i < p.area(); ++i) {
      Cell c = p.cell(i);
      int px = (c.x - p.min_x()) * cs, py = (top - c.y) * cs;
      const char* fill = moved.count(i) ? "#ffb703" : "#a8dadc";
      svg << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cs
          << "\" height=\"" << cs << "\" fill=\"" << fill
          << "\" stroke=\"#333\"/>\n";
      svg << "<text x=\"" << px + cs / 2 << "\" y=\"" << py + cs / 2
          << "\" font-size=\"" << cs / 3
          << "\" text-anchor=\"middle\" dominant-baseline=\"central\">"
          << cur.label_at(i) << "</text>\n";
    }
    svg << "</svg>\n";

    std::ostringstream name;
    name << "frame_" << std::setw(4) << std::setfill('0') << frame << ".svg";
    std::ofstream out(fs::path(out_dir) / name.str());
    out << svg.str();
    if (!out) throw Error(ErrorCode::IoError, "cannot write frame " + name.str());
  }
}

namespace {

// Identity outside one block x block square in each chamber, reversed inside:
// keeps the diameter fixed while the corridor grows.
Instance chamber_block_instance(int side, int corridor_width, int corridor_len,
                                int block) {
  Instance base = gen_dumbbell(side, corridor_width, corridor_len);
  const Polyomino& p = base.polyomino;
  std::vector<int> labels(p.area());
  for (int i = 0; i < p.area(); ++i) labels[i] = i + 1;
  for (int ox : {0, side + corridor_len}) {
    std::vector<int> cells;
    for (int x = 0; x < block; ++x)
      for (int y = 0; y < block; ++y) cells.push_back(p.index_of({ox + x, y}));
    for (size_t k = 0; k < cells.size() / 2; ++k)
      std::swap(labels[cells[k]], labels[cells[cells.size() - 1 - k]]);
  }
  return {p, Configuration::identity(p), Configuration::from_labels(std::move(labels))};
}

void run_planners(const std::string& id, const Instance& inst,
                  std::vector<BenchRecord>& out) {
  ShapeProfile profile = compute_shape_profile(inst.polyomino);
  using Planner = PlanResult (*)(const Instance&);
  const std::pair<const char*, Planner> planners[] = {
      {"any", plan_any},
      {"scaled", plan_scaled},
      {"bottleneck", plan_bottleneck},
      {"narrow", plan_narrow},
  };
  for (const auto& [name, planner] : planners) {
    BenchRecord rec;
    rec.instance_id = id;
    rec.n = inst.polyomino.area();
    rec.bottleneck = profile.bottleneck;
    rec.depth = profile.depth;
    rec.scale = profile.scale;
    rec.algorithm = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      PlanResult r = planner(inst);
      rec.d = r.diameter;
      rec.makespan = r.makespan;
      rec.lower_bound = r.lower_bound;
      rec.stretch_vs_lb = r.stretch_vs_lb;
    } catch (const Error&) {
      continue;  // planner not applicable to this instance
    }
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(rec));
  }
}

}  // namespace

std::vector<BenchRecord> bench(const std::string& suite, const std::string& csv_path) {
  std::vector<std::pair<std::string, Instance>> instances;
  if (suite == "std") {
    Polyomino rect = Polyomino::parse(
        "######\n######\n######\n######\n######\n######");
    instances.emplace_back("std/rect6", gen_random_instance(rect, 1));
    instances.emplace_back("std/l-scaled3",
                           gen_random_instance(gen_scaled(Polyomino::parse("#.\n##"), 3), 2));
    instances.emplace_back("std/wide8",
                           gen_random_instance(gen_scaled(gen_random_simple(5, 7), 8), 3));
    instances.emplace_back("std/dumbbell", gen_dumbbell(6, 4, 4));
  } else if (suite == "dumbbell-scaling") {
    for (int side : {24, 32, 40}) {
      std::ostringstream id;
      id << "dumbbell/s" << std::setw(3) << std::setfill('0') << side;
      instances.emplace_back(id.str(), gen_dumbbell(side, 8, 2));
    }
  } else if (suite == "corridor-scaling") {
    for (int len : {50, 100, 200}) {
      std::ostringstream id;
      id << "corridor/l" << std::setw(3) << std::setfill('0') << len;
      instances.emplace_back(id.str(), chamber_block_instance(12, 8, len, 4));
    }
  } else if (suite == "random") {
    int made = 0;
    for (uint64_t seed = 1; made < 3; ++seed) {
      Polyomino p = gen_random_simple(12 + 10 * made, seed * 271);
      try {
        Instance inst = gen_random_instance(p, seed);
        (void)plan_any(inst);  // keep only reconfigurable shapes
        std::ostringstream id;
        id << "random/n" << std::setw(3) << std::setfill('0') << p.area() << "-s" << seed;
        instances.emplace_back(id.str(), std::move(inst));
        ++made;
      } catch (const Error&) {
      }
    }
  } else {
    throw Error(ErrorCode::BadParameters, "unknown suite " + suite);
  }

  std::vector<BenchRecord> records;
  const bool heavy = suite == "dumbbell-scaling" || suite == "corridor-scaling";
  for (const auto& [id, inst] : instances) {
    if (heavy) {
      // Only the narrow planner is under study; the generalists would
      // dominate the wall time on these sizes.
      BenchRecord rec;
      ShapeProfile profile = compute_shape_profile(inst.polyomino);
      rec.instance_id = id;
      rec.n = inst.polyomino.area();
      rec.bottleneck = profile.bottleneck;
      rec.depth = profile.depth;
      rec.scale = profile.scale;
      rec.algorithm = "narrow";
      auto t0 = std::chrono::steady_clock::now();
      PlanResult r = plan_narrow(inst);
      rec.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rec.d = r.diameter;
      rec.makespan = r.makespan;
      rec.lower_bound = r.lower_bound;
      rec.stretch_vs_lb = r.stretch_vs_lb;
      records.push_back(std::move(rec));
    } else {
      run_planners(id, inst, records);
    }
  }
  std::sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    return a.instance_id != b.instance_id ? a.instance_id < b.instance_id
                                          : a.algorithm < b.algorithm;
  });

  std::ofstream out(csv_path);
  out << "instance_id,n,d,zeta,mu,c,algorithm,makespan,lower_bound,stretch_vs_lb,"
         "wall_time\n";
  for (const BenchRecord& r : records)
    out << r.instance_id << ',' << r.n << ',' << r.d << ',' << r.bottleneck << ','
        << r.depth << ',' << r.scale << ',' << r.algorithm << ',' << r.makespan << ','
        << r.lower_bound << ',' << r.stretch_vs_lb << ',' << r.wall_time << '\n';
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + csv_path);
  return records;
}

}  // namespace mapf

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapf/planners.hpp"
#include "mapf/shape.hpp"
#include "mapf/tooling.hpp"

using namespace mapf;
namespace fs = std::filesystem;

namespace {

int count_files(const fs::path& dir) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++n;
  }
  return n;
}

fs::path fresh_dir(const char* name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("dumbbell generator matches the requested geometry") {
  Instance inst = gen_dumbbell(4, 2, 3);
  CHECK(inst.polyomino.area() == 38);
  CHECK(compute_bottleneck(inst.polyomino).first == 2);

  // Full mirror exchange of the chambers, identity on the corridor.
  int fixed = 0;
  for (int i = 0; i < inst.polyomino.area(); ++i)
    if (inst.target.label_at(i) == i + 1) ++fixed;
  CHECK(fixed == 6);
  for (int i = 0; i < inst.polyomino.area(); ++i) {
    Cell c = inst.polyomino.cell(i);
    Cell m{inst.polyomino.width() - 1 - c.x, c.y};
    if (c.x < 4 || c.x >= 7) CHECK(inst.target.label_at(inst.polyomino.index_of(m)) == i + 1);
  }
}

TEST_CASE("dumbbell generator edge cases") {
  CHECK(gen_dumbbell(2, 2, 1).polyomino.area() == 10);
  CHECK(compute_bottleneck(gen_dumbbell(5, 5, 2).polyomino).first == 5);
  CHECK_THROWS_AS(gen_dumbbell(1, 1, 1), Error);
  CHECK_THROWS_AS(gen_dumbbell(4, 5, 1), Error);
  CHECK_THROWS_AS(gen_dumbbell(4, 2, 0), Error);
}

TEST_CASE("random generators are deterministic and well formed") {
  Polyomino a = gen_random_simple(30, 99);
  Polyomino b = gen_random_simple(30, 99);
  CHECK(a.serialize() == b.serialize());
  CHECK(a.area() == 30);
  CHECK(gen_random_simple(30, 100).serialize() != a.serialize());

  Instance inst = gen_random_instance(a, 5);
  CHECK(inst.start == Configuration::identity(a));
  CHECK(gen_random_instance(a, 5).target == inst.target);
}

TEST_CASE("scaling generator inflates cells into blocks") {
  Polyomino sq = gen_scaled(Polyomino::parse("#"), 5);
  CHECK(sq.area() == 25);
  CHECK(sq.width() == 5);

  Polyomino l3 = gen_scaled(Polyomino::parse("#.\n##"), 3);
  CHECK(l3.area() == 27);
  CHECK(compute_scale(l3).first == 3);
}

TEST_CASE("svg renderer writes one frame per configuration") {
  Polyomino p = Polyomino::parse("###\n###");
  Instance ident{p, Configuration::identity(p), Configuration::identity(p)};
  fs::path dir = fresh_dir("mapf_svg_ident");
  render_svg(ident, {}, dir.string());
  CHECK(count_files(dir) == 1);
  CHECK(fs::exists(dir / "frame_0000.svg"));

  Instance inst = gen_random_instance(p, 3);
  PlanResult r = plan_any(inst);
  dir = fresh_dir("mapf_svg_plan");
  render_svg(inst, r.schedule, dir.string());
  CHECK(count_files(dir) == r.makespan + 1);

  std::ifstream frame(dir / "frame_0000.svg");
  std::stringstream buf;
  buf << frame.rdbuf();
  CHECK(buf.str().find("<svg") != std::string::npos);
  CHECK(buf.str().find("text") != std::string::npos);
}

TEST_CASE("std bench suite produces a well-formed sorted CSV") {
  fs::path csv = fs::temp_directory_path() / "mapf_bench_std.csv";
  std::vector<BenchRecord> recs = bench("std", csv.string());
  REQUIRE(!recs.empty());
  for (size_t i = 1; i < recs.size(); ++i)
    CHECK(recs[i - 1].instance_id <= recs[i].instance_id);
  for (const BenchRecord& r : recs) {
    CHECK(r.makespan >= r.lower_bound);
    if (r.lower_bound >= 1) CHECK(r.stretch_vs_lb >= 1.0);
    CHECK(r.wall_time >= 0.0);
  }

  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "instance_id,n,d,zeta,mu,c,algorithm,makespan,lower_bound,stretch_vs_lb,"
        "wall_time");
  int rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == static_cast<int>(recs.size()));
}

TEST_CASE("random bench suite runs end to end") {
  fs::path csv = fs::temp_directory_path() / "mapf_bench_random.csv";
  std::vector<BenchRecord> recs = bench("random", csv.string());
  CHECK(recs.size() >= 3);
  for (const BenchRecord& r : recs) CHECK(r.n >= 12);
}

TEST_CASE("bench rejects unknown suites") {
  CHECK_THROWS_AS(bench("nope", "/tmp/mapf_bench_nope.csv"), Error);
}

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mapf/planners.hpp"
#include "mapf/primitives.hpp"
#include "mapf/shape.hpp"
#include "mapf/tooling.hpp"

using namespace mapf;

namespace {

constexpr int kExitInvalidInput = 1;
constexpr int kExitPlanningFailure = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
}

int cmd_params(const std::string& map_path) {
  Polyomino p = Polyomino::parse(read_file(map_path));
  std::cout << shape_profile_to_text(compute_shape_profile(p));
  return 0;
}

int cmd_check_ur(const std::string& map_path) {
  Polyomino p = Polyomino::parse(read_file(map_path));
  ReconfigurabilityResult rec = check_universal_reconfigurability(p);
  if (rec.reconfigurable) {
    std::cout << "reconfigurable\n";
    return 0;
  }
  std::cout << "not reconfigurable: ";
  if (rec.witness) {
    switch (rec.witness->kind) {
      case ReconfigurabilityWitness::Kind::UncoveredCell:
        std::cout << "cell (" << rec.witness->cell.x << "," << rec.witness->cell.y
                  << ") lies in no 2x2 square";
        break;
      case ReconfigurabilityWitness::Kind::EdgeWithoutSquare:
        std::cout << "an adjacent cell pair shares no 2x2 square";
        break;
      case ReconfigurabilityWitness::Kind::LoneSquare:
        std::cout << "a single 2x2 square only rotates";
        break;
    }
  }
  std::cout << "\n";
  return kExitInvalidInput;
}

int cmd_gen(const std::string& family, int n, int side, int width, int len, int factor,
            uint64_t seed, const std::string& out_path) {
  Instance inst = [&] {
    if (family == "dumbbell") return gen_dumbbell(side, width, len);
    if (family == "random") return gen_random_instance(gen_random_simple(n, seed), seed + 1);
    if (family == "scaled")
      return gen_random_instance(gen_scaled(gen_random_simple(n, seed), factor), seed + 1);
    throw Error(ErrorCode::BadParameters, "unknown family " + family);
  }();
  std::string json = instance_to_json(inst);
  if (out_path.empty())
    std::cout << json << "\n";
  else
    write_file(out_path, json);
  return 0;
}

int cmd_plan(const std::string& algo, const std::string& in_path,
             const std::string& out_path, bool race) {
  Instance inst = instance_from_json(read_file(in_path));
  PlanResult r = [&] {
    try {
      if (algo == "any") return plan_any(inst);
      if (algo == "scaled") return plan_scaled(inst);
      if (algo == "bottleneck") return plan_bottleneck(inst);
      if (algo == "narrow") return plan_narrow(inst);
      return auto_plan(inst, race);
    } catch (const Error& e) {
      std::cerr << "planning failed: " << e.what() << "\n";
      std::exit(kExitPlanningFailure);
    }
  }();
  write_file(out_path, schedule_to_text(r.schedule));
  write_file(out_path + ".json", plan_result_to_json(r));
  std::cout << "algorithm " << algorithm_name(r.algorithm) << ", makespan "
            << r.makespan << ", lower bound " << r.lower_bound << "\n";
  return 0;
}

int cmd_validate(const std::string& in_path, const std::string& sched_path) {
  Instance inst = instance_from_json(read_file(in_path));
  Schedule s = schedule_from_text(read_file(sched_path));
  ValidationReport rep = validate_schedule(inst, s);
  if (rep.valid) {
    std::cout << "valid, makespan " << rep.makespan << ", diameter " << rep.diameter
              << ", stretch " << rep.stretch << "\n";
    return 0;
  }
  std::cout << "invalid at step " << rep.failing_step << ": " << rep.reason << "\n";
  return kExitInvalidInput;
}

int cmd_oracle(const std::string& in_path, long long limit) {
  Instance inst = instance_from_json(read_file(in_path));
  auto opt = oracle_optimal(inst, limit);
  if (opt)
    std::cout << "optimal " << *opt << "\n";
  else
    std::cout << "unknown\n";
  return 0;
}

int cmd_bench(const std::string& suite, const std::string& csv) {
  std::vector<BenchRecord> recs = bench(suite, csv);
  std::cout << recs.size() << " records written to " << csv << "\n";
  return 0;
}

int cmd_render(const std::string& in_path, const std::string& sched_path,
               const std::string& out_dir) {
  Instance inst = instance_from_json(read_file(in_path));
  Schedule s = schedule_from_text(read_file(sched_path));
  render_svg(inst, s, out_dir);
  std::cout << s.makespan() + 1 << " frames written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planner toolkit for dense agent reconfiguration in polyominoes"};
  app.require_subcommand(1);

  std::string map_path, family, algo = "auto", in_path, out_path, sched_path;
  std::string suite, csv, out_dir;
  int n = 20, side = 4, width = 2, len = 3, factor = 3;
  uint64_t seed = 1;
  long long limit = 5000000;
  bool race = false;

  auto* params = app.add_subcommand("params", "Print shape parameters of an ASCII map");
  params->add_option("map", map_path)->required();

  auto* check = app.add_subcommand("check-ur", "Check universal reconfigurability");
  check->add_option("map", map_path)->required();

  auto* gen = app.add_subcommand("gen", "Generate an instance (dumbbell|random|scaled)");
  gen->add_option("family", family)->required();
  gen->add_option("--n", n);
  gen->add_option("--side", side);
  gen->add_option("--width", width);
  gen->add_option("--len", len);
  gen->add_option("--factor", factor);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path);

  auto* plan = app.add_subcommand("plan", "Plan a schedule for an instance");
  plan->add_option("--algo", algo)
      ->check(CLI::IsMember({"any", "scaled", "bottleneck", "narrow", "auto"}));
  plan->add_option("--in", in_path)->required();
  plan->add_option("--out", out_path)->required();
  plan->add_flag("--race", race);

  auto* validate = app.add_subcommand("validate", "Validate a schedule");
  validate->add_option("--in", in_path)->required();
  validate->add_option("--sched", sched_path)->required();

  auto* oracle = app.add_subcommand("oracle", "Exact optimal makespan (small instances)");
  oracle->add_option("--in", in_path)->required();
  oracle->add_option("--limit", limit);

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  bench_cmd->add_option("--suite", suite)->required();
  bench_cmd->add_option("--csv", csv)->required();

  auto* render = app.add_subcommand("render", "Render schedule frames as SVG");
  render->add_option("--in", in_path)->required();
  render->add_option("--sched", sched_path)->required();
  render->add_option("--out", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidInput;
  }

  try {
    if (params->parsed()) return cmd_params(map_path);
    if (check->parsed()) return cmd_check_ur(map_path);
    if (gen->parsed()) return cmd_gen(family, n, side, width, len, factor, seed, out_path);
    if (plan->parsed()) return cmd_plan(algo, in_path, out_path, race);
    if (validate->parsed()) return cmd_validate(in_path, sched_path);
    if (oracle->parsed()) return cmd_oracle(in_path, limit);
    if (bench_cmd->parsed()) return cmd_bench(suite, csv);
    if (render->parsed()) return cmd_render(in_path, sched_path, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return 0;
}

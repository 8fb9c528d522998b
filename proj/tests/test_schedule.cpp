#include <doctest.h>

#include "mapf/schedule.hpp"
#include "test_util.hpp"

using namespace mapf;

namespace {

Transformation rotation_2x2() {
  // Counterclockwise rotation of a 2x2 square by one position.
  return Transformation{{{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {0, 1}}, {{0, 1}, {0, 0}}}};
}

}  // namespace

TEST_CASE("apply_transformation rotates a 2x2 square") {
  Polyomino p = Polyomino::parse("##\n##");
  Configuration c = Configuration::identity(p);
  Configuration r = apply_transformation(p, c, rotation_2x2());
  // Cells are indexed in sorted (x, y) order: (0,0) (0,1) (1,0) (1,1).
  CHECK(r.label_at(p.index_of({1, 0})) == c.label_at(p.index_of({0, 0})));
  CHECK(r.label_at(p.index_of({1, 1})) == c.label_at(p.index_of({1, 0})));
  CHECK(r.label_at(p.index_of({0, 1})) == c.label_at(p.index_of({1, 1})));
  CHECK(r.label_at(p.index_of({0, 0})) == c.label_at(p.index_of({0, 1})));

  CHECK(apply_transformation(p, c, Transformation{}) == c);
}

TEST_CASE("transformation invariants are enforced") {
  Polyomino p = Polyomino::parse("##\n##");
  Configuration c = Configuration::identity(p);

  auto code_of = [&](const Transformation& t) {
    try {
      apply_transformation(p, c, t);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };

  CHECK(code_of({{{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}}}) == ErrorCode::SwapForbidden);
  CHECK(code_of({{{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}}}) == ErrorCode::SourceCollision);
  CHECK(code_of({{{{0, 0}, {1, 0}}, {{1, 1}, {1, 0}}}}) == ErrorCode::TargetCollision);
  CHECK(code_of({{{{0, 0}, {1, 1}}}}) == ErrorCode::NotAdjacent);
  CHECK(code_of({{{{0, 0}, {1, 0}}}}) == ErrorCode::BrokenCycle);
  CHECK(code_of({{{{2, 0}, {3, 0}}}}) == ErrorCode::CellNotInDomain);
}

TEST_CASE("validate_schedule") {
  Polyomino p = Polyomino::parse("##\n##");
  Configuration start = Configuration::identity(p);

  SUBCASE("identity instance, empty schedule") {
    ValidationReport rep = validate_schedule({p, start, start}, Schedule{});
    CHECK(rep.valid);
    CHECK(rep.makespan == 0);
    CHECK(rep.diameter == 0);
  }

  SUBCASE("one-step rotation") {
    Configuration target = apply_transformation(p, start, rotation_2x2());
    Schedule s{{rotation_2x2()}};
    ValidationReport rep = validate_schedule({p, start, target}, s);
    CHECK(rep.valid);
    CHECK(rep.makespan == 1);
    CHECK(rep.diameter == 1);
    CHECK(rep.stretch == doctest::Approx(1.0));
  }

  SUBCASE("target mismatch") {
    Configuration target = apply_transformation(p, start, rotation_2x2());
    ValidationReport rep = validate_schedule({p, start, target}, Schedule{});
    CHECK_FALSE(rep.valid);
    CHECK(rep.reason == "TargetMismatch");
  }

  SUBCASE("bad step is reported with its index") {
    Schedule s{{Transformation{}, Transformation{{{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}}}}};
    ValidationReport rep = validate_schedule({p, start, start}, s);
    CHECK_FALSE(rep.valid);
    CHECK(rep.failing_step == 1);
  }
}

TEST_CASE("diameter") {
  Polyomino p = Polyomino::parse("##\n##");
  Configuration start = Configuration::identity(p);
  CHECK(diameter({p, start, start}) == 0);
  Configuration target = apply_transformation(p, start, rotation_2x2());
  CHECK(diameter({p, start, target}) == 1);
}

TEST_CASE("concat and merge_parallel") {
  Polyomino p = Polyomino::parse("#####\n#####");
  Configuration start = Configuration::identity(p);

  auto shift = [](Transformation t, int dx) {
    for (Move& m : t.moves) {
      m.from.x += dx;
      m.to.x += dx;
    }
    return t;
  };
  Transformation left = rotation_2x2();
  Transformation right = shift(rotation_2x2(), 3);

  std::vector<int> left_region{p.index_of({0, 0}), p.index_of({0, 1}), p.index_of({1, 0}),
                               p.index_of({1, 1})};
  std::vector<int> right_region{p.index_of({3, 0}), p.index_of({3, 1}), p.index_of({4, 0}),
                                p.index_of({4, 1})};

  SUBCASE("merge of two disjoint rotations is a single step") {
    Schedule merged = merge_parallel(
        {{left_region, Schedule{{left}}}, {right_region, Schedule{{right}}}}, p);
    CHECK(merged.makespan() == 1);
    CHECK(merged.steps[0].moves.size() == 8);
    Configuration after = apply_transformation(p, start, merged.steps[0]);
    CHECK(after == apply_transformation(p, apply_transformation(p, start, left), right));
  }

  SUBCASE("makespan of a merge is the max of the parts") {
    Schedule three{{left, left, left}};
    Schedule five{{right, right, right, right, right}};
    Schedule merged = merge_parallel({{left_region, three}, {right_region, five}}, p);
    CHECK(merged.makespan() == 5);
  }

  SUBCASE("overlap and cross-region moves are rejected") {
    CHECK_THROWS_AS(merge_parallel({{left_region, Schedule{}}, {left_region, Schedule{}}}, p),
                    Error);
    CHECK_THROWS_AS(merge_parallel({{left_region, Schedule{{right}}}}, p), Error);
  }

  SUBCASE("concat with empty is identity") {
    Schedule s{{left, right}};
    CHECK(concat(s, Schedule{}).makespan() == 2);
    CHECK(concat(Schedule{}, s).makespan() == 2);
  }

  SUBCASE("apply distributes over concat") {
    Schedule a{{left}};
    Schedule b{{right}};
    Configuration via_concat = start;
    for (const Transformation& t : concat(a, b).steps)
      via_concat = apply_transformation(p, via_concat, t);
    Configuration stepwise = apply_transformation(p, start, left);
    stepwise = apply_transformation(p, stepwise, right);
    CHECK(via_concat == stepwise);
  }
}

TEST_CASE("schedule text round-trip") {
  Transformation rot = rotation_2x2();
  Schedule s{{rot, Transformation{}, rot}};
  std::string text = schedule_to_text(s);
  Schedule back = schedule_from_text(text);
  CHECK(back.makespan() == 3);
  CHECK(schedule_to_text(back) == text);
}

TEST_CASE("instance json round-trip") {
  Polyomino p = Polyomino::parse("##\n.#");
  Configuration start = Configuration::identity(p);
  Configuration target = Configuration::from_labels({2, 3, 1});
  Instance inst{p, start, target};
  Instance back = instance_from_json(instance_to_json(inst));
  CHECK(back.polyomino.serialize() == p.serialize());
  CHECK(back.start == start);
  CHECK(back.target == target);

  CHECK_THROWS_AS(instance_from_json("not json"), Error);
  CHECK_THROWS_AS(instance_from_json(R"({"map":[[1]],"start":[[2]],"target":[[1]]})"), Error);
}

TEST_CASE("transformations preserve the label multiset") {
  for (unsigned seed = 0; seed < 5; ++seed) {
    Polyomino p = test_util::random_simple_polyomino(16, 300 + seed);
    Configuration c = test_util::random_configuration(p, seed);
    std::vector<int> sorted_before = c.labels();
    std::sort(sorted_before.begin(), sorted_before.end());
    // A hold-only transformation plus replay keeps the permutation intact.
    Configuration after = apply_transformation(p, c, Transformation{});
    std::vector<int> sorted_after = after.labels();
    std::sort(sorted_after.begin(), sorted_after.end());
    CHECK(sorted_before == sorted_after);
  }
}

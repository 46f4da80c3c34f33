#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "relsym/sim/dataset.hpp"
#include "relsym/sim/world.hpp"

using namespace relsym::sim;

namespace {

WorldState two_blocks(BlockType a = BlockType::Short, BlockType b = BlockType::Short) {
  WorldState s;
  s.objects[0] = ObjectFeature{0, 0, kHalfZ, 0, a};
  s.objects[1] = ObjectFeature{10, 0, kHalfZ, 0, b};
  s.support[0] = kTable;
  s.support[1] = kTable;
  return s;
}

bool aabb_overlap(const ObjectFeature& a, const ObjectFeature& b) {
  return std::abs(a.x - b.x) < a.half_x() + b.half_x() - 1e-9 &&
         std::abs(a.y - b.y) < a.half_y() + b.half_y() - 1e-9;
}

}  // namespace

TEST_CASE("init_scene is deterministic under a fixed seed") {
  WorldState a = init_scene(2, 7);
  WorldState b = init_scene(2, 7);
  CHECK(a == b);
}

TEST_CASE("init_scene places objects without footprint overlap") {
  WorldState s = init_scene(4, 3);
  REQUIRE(s.objects.size() == 4);
  for (auto i = s.objects.begin(); i != s.objects.end(); ++i)
    for (auto j = std::next(i); j != s.objects.end(); ++j)
      CHECK_FALSE(aabb_overlap(i->second, j->second));
}

TEST_CASE("init_scene supports eight objects") {
  WorldState s = init_scene(8, 1);
  CHECK(s.objects.size() == 8);
  for (const auto& [id, sup] : s.support) CHECK(sup == kTable);
  for (const auto& [id, obj] : s.objects) CHECK(obj.z >= kHalfZ - 1e-12);
}

TEST_CASE("side grasp of a short block is a no-op") {
  WorldState s = two_blocks();
  for (Side g : {Side::Left, Side::Right}) {
    ActionSpec a{0, g, 1, Side::Center};
    CHECK(apply_action(s, a) == s);
  }
}

TEST_CASE("center pick-place stacks a short block onto another") {
  WorldState s = two_blocks();
  ActionSpec a{0, Side::Center, 1, Side::Center};
  WorldState next = apply_action(s, a);
  const ObjectFeature& moved = next.objects.at(0);
  CHECK(moved.x == doctest::Approx(10.0));
  CHECK(moved.y == doctest::Approx(0.0));
  CHECK(moved.z == doctest::Approx(7.5));
  CHECK(next.support.at(0) == 1);
  CHECK(next.support.at(1) == kTable);
}

TEST_CASE("center grasp carries the supported stack rigidly") {
  WorldState s;
  s.objects[0] = ObjectFeature{0, 0, kHalfZ, 0, BlockType::Long};
  s.objects[1] = ObjectFeature{5, 0, 7.5, 0, BlockType::Short};  // rides on the long block
  s.objects[2] = ObjectFeature{30, 20, kHalfZ, 0, BlockType::Short};
  s.support[0] = kTable;
  s.support[1] = 0;
  s.support[2] = kTable;

  ActionSpec a{0, Side::Center, 2, Side::Center};
  WorldState next = apply_action(s, a);
  double dx0 = next.objects.at(0).x - s.objects.at(0).x;
  double dy0 = next.objects.at(0).y - s.objects.at(0).y;
  double dx1 = next.objects.at(1).x - s.objects.at(1).x;
  double dy1 = next.objects.at(1).y - s.objects.at(1).y;
  CHECK(dx0 == doctest::Approx(dx1));
  CHECK(dy0 == doctest::Approx(dy1));
  CHECK(next.support.at(1) == 0);
  // Long block rests on the short landing target.
  CHECK(next.support.at(0) == 2);
  CHECK(next.objects.at(0).z == doctest::Approx(7.5));
  CHECK(next.objects.at(1).z == doctest::Approx(12.5));
}

TEST_CASE("off-center grasp of a long block sheds its cargo straight down") {
  WorldState s;
  s.objects[0] = ObjectFeature{0, 0, kHalfZ, 0, BlockType::Long};
  s.objects[1] = ObjectFeature{2, 0, 7.5, 0, BlockType::Short};
  s.objects[2] = ObjectFeature{30, 20, kHalfZ, 0, BlockType::Short};
  s.support[0] = kTable;
  s.support[1] = 0;
  s.support[2] = kTable;

  ActionSpec a{0, Side::Left, 2, Side::Center};
  WorldState next = apply_action(s, a);
  // Cargo keeps its x, y and lands on the table.
  CHECK(next.objects.at(1).x == doctest::Approx(2.0));
  CHECK(next.objects.at(1).y == doctest::Approx(0.0));
  CHECK(next.objects.at(1).z == doctest::Approx(kHalfZ));
  CHECK(next.support.at(1) == kTable);
  // The long block itself was carried to the landing target.
  CHECK(next.support.at(0) == 2);
}

TEST_CASE("release left of a short block lands beside it on the table") {
  WorldState s = two_blocks();
  ActionSpec a{0, Side::Center, 1, Side::Left};
  WorldState next = apply_action(s, a);
  CHECK(next.objects.at(0).x == doctest::Approx(0.0));  // 10 - 10
  CHECK(next.objects.at(0).z == doctest::Approx(kHalfZ));
  CHECK(next.support.at(0) == kTable);
}

TEST_CASE("release right on a long block stacks near its end") {
  WorldState s = two_blocks(BlockType::Short, BlockType::Long);
  ActionSpec a{0, Side::Center, 1, Side::Right};
  WorldState next = apply_action(s, a);
  CHECK(next.objects.at(0).x == doctest::Approx(20.0));
  CHECK(next.objects.at(0).z == doctest::Approx(7.5));
  CHECK(next.support.at(0) == 1);
}

TEST_CASE("contact graph lists support links symmetrically") {
  WorldState s = two_blocks();
  CHECK(contact_graph(s).empty());

  WorldState stacked = apply_action(s, ActionSpec{0, Side::Center, 1, Side::Center});
  CHECK(contact_graph(stacked) == ContactSet{{0, 1}});

  WorldState shelf;
  shelf.objects[0] = ObjectFeature{0, 0, kHalfZ, 0, BlockType::Long};
  shelf.objects[1] = ObjectFeature{-8, 0, 7.5, 0, BlockType::Short};
  shelf.objects[2] = ObjectFeature{8, 0, 7.5, 0, BlockType::Short};
  shelf.support[0] = kTable;
  shelf.support[1] = 0;
  shelf.support[2] = 0;
  CHECK(contact_graph(shelf) == ContactSet{{0, 1}, {0, 2}});
}

TEST_CASE("effects subtract the arm carry and keep bystanders at zero") {
  WorldState s = two_blocks();
  ActionSpec a{0, Side::Center, 1, Side::Center};
  WorldState next = apply_action(s, a);
  auto effects = effect_of(s, next, a);

  // Picked block: stacked one block height up, no lateral residue.
  CHECK(effects[0][0] == doctest::Approx(0.0));
  CHECK(effects[0][1] == doctest::Approx(0.0));
  CHECK(effects[0][2] == doctest::Approx(5.0));
  // Place target: untouched.
  for (double v : effects[1]) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("carry onto an equal-height surface leaves a zero effect") {
  WorldState s = two_blocks();
  ActionSpec a{0, Side::Center, 1, Side::Left};  // lands on the table beside the target
  WorldState next = apply_action(s, a);
  auto effects = effect_of(s, next, a);
  for (double v : effects[0]) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("apply_action preserves object count, types, and support acyclicity") {
  std::mt19937_64 rng(11);
  WorldState s = init_scene(4, 5);
  for (int i = 0; i < 200; ++i) {
    std::uniform_int_distribution<int> obj(0, 3), side(0, 2);
    ActionSpec a;
    a.pick = obj(rng);
    do { a.place = obj(rng); } while (a.place == a.pick);
    a.grasp = static_cast<Side>(side(rng));
    a.release = static_cast<Side>(side(rng));
    WorldState next = apply_action(s, a);

    REQUIRE(next.objects.size() == s.objects.size());
    for (const auto& [id, obj_] : s.objects) CHECK(next.objects.at(id).type == obj_.type);

    // Walk every support chain; must reach the table without revisiting.
    for (const auto& [id, sup] : next.support) {
      std::set<ObjectId> seen{id};
      ObjectId cur = sup;
      while (cur != kTable) {
        REQUIRE(!seen.count(cur));
        seen.insert(cur);
        cur = next.support.at(cur);
      }
    }
    for (const auto& [id, sup] : next.support) {
      double surface = sup == kTable ? 0.0 : next.objects.at(sup).top_z();
      CHECK(next.objects.at(id).z == doctest::Approx(surface + kHalfZ));
    }
    s = next;
  }
}

TEST_CASE("determinism: identical state and action give identical next states") {
  WorldState s = init_scene(3, 21);
  ActionSpec a{0, Side::Center, 2, Side::Right};
  CHECK(apply_action(s, a) == apply_action(s, a));
}

TEST_CASE("collect_dataset is reproducible and keeps the relevance invariant") {
  CollectOptions opts;
  opts.n_samples = 1000;
  opts.seed = 5;
  auto data = collect_dataset(opts);
  REQUIRE(static_cast<int>(data.size()) == opts.n_samples);

  auto again = collect_dataset(opts);
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(data[i].ids == again[i].ids);
    CHECK(data[i].pre == again[i].pre);
    CHECK(data[i].action == again[i].action);
  }

  for (const Transition& t : data) {
    REQUIRE(t.pre.size() == t.ids.size());
    REQUIRE(t.post.size() == t.ids.size());
    REQUIRE(t.effects.size() == t.ids.size());
    // Every recorded object is an action argument or touches one in the pre state.
    for (ObjectId id : t.ids) {
      bool is_arg = id == t.action.pick || id == t.action.place;
      bool touches_arg = false;
      for (const auto& [a, b] : t.contacts_pre) {
        if ((a == id && (b == t.action.pick || b == t.action.place)) ||
            (b == id && (a == t.action.pick || a == t.action.place)))
          touches_arg = true;
      }
      CHECK((is_arg || touches_arg));
    }
  }
}

TEST_CASE("dataset round-trips through the line-delimited file byte-identically") {
  CollectOptions opts;
  opts.n_samples = 50;
  opts.seed = 9;
  auto data = collect_dataset(opts);

  auto tmp = std::filesystem::temp_directory_path() / "relsym_test_dataset.jsonl";
  save_dataset(tmp.string(), data);
  auto loaded = load_dataset(tmp.string());
  REQUIRE(loaded.size() == data.size());

  auto tmp2 = std::filesystem::temp_directory_path() / "relsym_test_dataset2.jsonl";
  save_dataset(tmp2.string(), loaded);
  std::ifstream f1(tmp), f2(tmp2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  std::filesystem::remove(tmp);
  std::filesystem::remove(tmp2);
}

TEST_CASE("split_dataset takes consecutive chunks at the requested sizes") {
  CollectOptions opts;
  opts.n_samples = 200;
  opts.seed = 3;
  auto data = collect_dataset(opts);
  SplitView view = split_dataset(data, 160, 20, 20);
  CHECK(view.train.size() == 160);
  CHECK(view.val.size() == 20);
  CHECK(view.test.size() == 20);
  CHECK(view.train.front().ids == data.front().ids);
  CHECK_THROWS_AS(split_dataset(data, 200, 20, 20), ContractViolation);
}

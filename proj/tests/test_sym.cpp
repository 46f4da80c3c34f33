#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>

#include "doctest.h"
#include "relsym/sim/dataset.hpp"
#include "relsym/sim/world.hpp"
#include "relsym/sym/symbolic.hpp"

using namespace relsym;
using namespace relsym::sym;

namespace {

net::RelationalNet<float> random_model(std::uint64_t seed = 7) {
  net::NetConfig cfg;
  return net::RelationalNet<float>::make(cfg, seed);
}

}  // namespace

TEST_CASE("symbolize_state is deterministic and shape-consistent") {
  auto model = random_model();
  sim::WorldState w = sim::init_scene(3, 11);
  std::vector<sim::ObjectId> ids{0, 1, 2};
  std::vector<std::array<double, 6>> feats;
  for (auto id : ids) feats.push_back(w.objects.at(id).features());

  SymbolicState a = symbolize_state(model, ids, feats);
  SymbolicState b = symbolize_state(model, ids, feats);
  CHECK(a == b);
  REQUIRE(a.unary.size() == 3);
  REQUIRE(static_cast<int>(a.rel.size()) == model.cfg.n_heads);
  for (const auto& m : a.rel) {
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 3);
  }

  std::vector<sim::ObjectId> solo{0};
  SymbolicState s = symbolize_state(model, solo, std::span(feats.data(), 1));
  CHECK(s.unary.size() == 1);
  for (const auto& m : s.rel) CHECK(m.rows() == 1);
}

TEST_CASE("shared objects keep their bits when a third object joins") {
  auto model = random_model(9);
  sim::WorldState w = sim::init_scene(3, 13);
  std::vector<std::array<double, 6>> feats;
  for (const auto& [id, obj] : w.objects) feats.push_back(obj.features());

  SymbolicState two = symbolize_state(model, {0, 1}, std::span(feats.data(), 2));
  SymbolicState three = symbolize_state(model, {0, 1, 2}, feats);
  CHECK(two.unary[0] == three.unary[0]);
  CHECK(two.unary[1] == three.unary[1]);
  for (std::size_t h = 0; h < two.rel.size(); ++h)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(two.rel[h](i, j) == three.rel[h](i, j));
}

TEST_CASE("symbolize_dataset preserves order, count, and object sets") {
  auto model = random_model(3);
  CHECK(symbolize_dataset(model, {}).empty());

  sim::CollectOptions opts;
  opts.n_samples = 200;
  opts.seed = 21;
  auto data = sim::collect_dataset(opts);
  auto symbolic = symbolize_dataset(model, data);
  REQUIRE(symbolic.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(symbolic[i].pre.ids == data[i].ids);
    CHECK(symbolic[i].post.ids == data[i].ids);
    CHECK(symbolic[i].action == data[i].action);
  }
}

TEST_CASE("no-op transitions symbolize to identical pre and post states") {
  auto model = random_model(5);
  sim::CollectOptions opts;
  opts.n_samples = 400;
  opts.seed = 33;
  auto data = sim::collect_dataset(opts);

  int noops = 0;
  for (const auto& t : data) {
    if (t.pre != t.post) continue;
    ++noops;
    SymbolicTransition st = symbolize_dataset(model, {t}).front();
    CHECK(st.pre == st.post);
  }
  CHECK(noops > 10);  // random exploration produces plenty of failed grasps
}

TEST_CASE("symbolic dataset round-trips through its file format") {
  auto model = random_model(4);
  sim::CollectOptions opts;
  opts.n_samples = 60;
  opts.seed = 8;
  auto data = sim::collect_dataset(opts);
  auto symbolic = symbolize_dataset(model, data);

  auto path = (std::filesystem::temp_directory_path() / "relsym_symbolic.jsonl").string();
  save_symbolic(path, symbolic);
  auto loaded = load_symbolic(path);
  REQUIRE(loaded.size() == symbolic.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) CHECK(loaded[i] == symbolic[i]);
  std::filesystem::remove(path);
}

#include "relsym/sim/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "json.hpp"
#include "relsym/sim/world.hpp"

namespace relsym::sim {

namespace {

using ordered_json = nlohmann::ordered_json;

ActionSpec random_action(const WorldState& state, std::mt19937_64& rng) {
  std::vector<ObjectId> ids;
  for (const auto& [id, obj] : state.objects) ids.push_back(id);
  if (ids.size() < 2) throw ContractViolation("random_action: need at least two objects");
  std::uniform_int_distribution<std::size_t> pick_dist(0, ids.size() - 1);
  std::uniform_int_distribution<std::size_t> place_dist(0, ids.size() - 2);
  std::uniform_int_distribution<int> side_dist(0, 2);

  ActionSpec a;
  a.pick = ids[pick_dist(rng)];
  std::size_t pi = place_dist(rng);
  // Skip over the pick object so place is uniform over the others.
  std::vector<ObjectId> others;
  for (ObjectId id : ids)
    if (id != a.pick) others.push_back(id);
  a.place = others[pi];
  a.grasp = static_cast<Side>(side_dist(rng));
  a.release = static_cast<Side>(side_dist(rng));
  return a;
}

Transition make_transition(const WorldState& pre, const ActionSpec& action,
                           const WorldState& post, int episode, int step) {
  Transition t;
  t.action = action;
  t.episode = episode;
  t.step = step;

  std::set<ObjectId> rel = relevant_objects(pre, action);
  t.ids.assign(rel.begin(), rel.end());

  std::vector<EffectVec> all_effects = effect_of(pre, post, action);
  std::vector<ObjectId> all_ids;
  for (const auto& [id, obj] : pre.objects) all_ids.push_back(id);

  for (ObjectId id : t.ids) {
    t.pre.push_back(pre.objects.at(id).features());
    t.post.push_back(post.objects.at(id).features());
    auto it = std::find(all_ids.begin(), all_ids.end(), id);
    t.effects.push_back(all_effects[static_cast<std::size_t>(it - all_ids.begin())]);
  }

  for (const auto& [a, b] : contact_graph(pre))
    if (rel.count(a) && rel.count(b)) t.contacts_pre.insert({a, b});
  for (const auto& [a, b] : contact_graph(post))
    if (rel.count(a) && rel.count(b)) t.contacts_post.insert({a, b});
  return t;
}

ordered_json action_to_json(const ActionSpec& a) {
  return ordered_json{{"pick", a.pick},
                      {"grasp", to_string(a.grasp)},
                      {"place", a.place},
                      {"release", to_string(a.release)}};
}

ActionSpec action_from_json(const ordered_json& j) {
  ActionSpec a;
  a.pick = j.at("pick").get<ObjectId>();
  a.grasp = side_from_string(j.at("grasp").get<std::string>());
  a.place = j.at("place").get<ObjectId>();
  a.release = side_from_string(j.at("release").get<std::string>());
  return a;
}

ordered_json contacts_to_json(const ContactSet& contacts) {
  ordered_json arr = ordered_json::array();
  for (const auto& [a, b] : contacts) arr.push_back(ordered_json::array({a, b}));
  return arr;
}

ContactSet contacts_from_json(const ordered_json& arr) {
  ContactSet out;
  for (const auto& pair : arr) out.insert({pair.at(0).get<int>(), pair.at(1).get<int>()});
  return out;
}

}  // namespace

std::vector<Transition> collect_dataset(const CollectOptions& opts) {
  if (opts.n_samples < 1) throw ContractViolation("collect_dataset: n_samples must be >= 1");
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> n_dist(opts.n_objects_min, opts.n_objects_max);

  std::vector<Transition> out;
  out.reserve(static_cast<std::size_t>(opts.n_samples));
  int episode = 0;
  while (static_cast<int>(out.size()) < opts.n_samples) {
    WorldState state = init_scene(n_dist(rng), rng());
    for (int step = 0; step < opts.episode_len && static_cast<int>(out.size()) < opts.n_samples;
         ++step) {
      ActionSpec action = random_action(state, rng);
      WorldState post = apply_action(state, action);
      out.push_back(make_transition(state, action, post, episode, step));
      state = std::move(post);
    }
    ++episode;
  }
  return out;
}

SplitView split_dataset(const std::vector<Transition>& all, int n_train, int n_val,
                        int n_test) {
  if (n_train < 0 || n_val < 0 || n_test < 0 ||
      static_cast<std::size_t>(n_train) + n_val + n_test > all.size())
    throw ContractViolation("split_dataset: split sizes exceed dataset");
  SplitView view;
  auto it = all.begin();
  view.train.assign(it, it + n_train);
  it += n_train;
  view.val.assign(it, it + n_val);
  it += n_val;
  view.test.assign(it, it + n_test);
  return view;
}

void save_dataset(const std::string& path, const std::vector<Transition>& transitions) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  ordered_json header{{"format", "relsym-dataset"},
                      {"version", 1},
                      {"d_o", kFeatureDim},
                      {"feature_fields", {"x", "y", "z", "yaw", "is_short", "is_long"}},
                      {"action_encoding", "pick-grasp-place-release/v1"},
                      {"n_samples", transitions.size()}};
  out << header.dump() << "\n";

  for (const Transition& t : transitions) {
    ordered_json rec{{"ep", t.episode},   {"step", t.step},
                     {"ids", t.ids},      {"pre", t.pre},
                     {"action", action_to_json(t.action)},
                     {"post", t.post},    {"effects", t.effects},
                     {"contacts_pre", contacts_to_json(t.contacts_pre)},
                     {"contacts_post", contacts_to_json(t.contacts_post)}};
    out << rec.dump() << "\n";
  }
}

std::vector<Transition> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  ordered_json header = ordered_json::parse(line);
  if (header.at("format") != "relsym-dataset")
    throw std::runtime_error("not a relsym dataset: " + path);
  if (header.at("d_o").get<int>() != kFeatureDim)
    throw std::runtime_error("dataset feature dimension mismatch");

  std::vector<Transition> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json rec = ordered_json::parse(line);
    Transition t;
    t.episode = rec.at("ep").get<int>();
    t.step = rec.at("step").get<int>();
    t.ids = rec.at("ids").get<std::vector<ObjectId>>();
    t.pre = rec.at("pre").get<std::vector<std::array<double, kFeatureDim>>>();
    t.action = action_from_json(rec.at("action"));
    t.post = rec.at("post").get<std::vector<std::array<double, kFeatureDim>>>();
    t.effects = rec.at("effects").get<std::vector<EffectVec>>();
    t.contacts_pre = contacts_from_json(rec.at("contacts_pre"));
    t.contacts_post = contacts_from_json(rec.at("contacts_post"));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace relsym::sim

#include "relsym/sym/symbolic.hpp"

#include <fstream>

#include "json.hpp"

namespace relsym::sym {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json state_to_json(const SymbolicState& s) {
  ordered_json rel = ordered_json::array();
  for (const auto& m : s.rel) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    rel.push_back(rows);
  }
  return ordered_json{{"unary", s.unary}, {"rel", rel}};
}

SymbolicState state_from_json(const ordered_json& j, const std::vector<sim::ObjectId>& ids) {
  SymbolicState s;
  s.ids = ids;
  s.unary = j.at("unary").get<std::vector<std::vector<int>>>();
  for (const auto& rows : j.at("rel")) {
    Eigen::MatrixXi m(rows.size(), rows.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index jj = 0; jj < m.cols(); ++jj) m(i, jj) = rows.at(i).at(jj).get<int>();
    s.rel.push_back(std::move(m));
  }
  return s;
}

}  // namespace

SymbolicState symbolize_state(const net::RelationalNet<float>& model,
                              const std::vector<sim::ObjectId>& ids,
                              std::span<const std::array<double, 6>> features) {
  if (ids.size() != features.size())
    throw sim::ContractViolation("symbolize_state: ids/features size mismatch");
  SymbolicState s;
  s.ids = ids;
  s.unary = net::encode_unary(model, features);
  s.rel = net::encode_relational(model, features);
  return s;
}

std::vector<SymbolicTransition> symbolize_dataset(
    const net::RelationalNet<float>& model, const std::vector<sim::Transition>& transitions) {
  std::vector<SymbolicTransition> out;
  out.reserve(transitions.size());
  for (const auto& t : transitions) {
    SymbolicTransition st;
    st.pre = symbolize_state(model, t.ids, t.pre);
    st.action = t.action;
    st.post = symbolize_state(model, t.ids, t.post);
    out.push_back(std::move(st));
  }
  return out;
}

void save_symbolic(const std::string& path, const std::vector<SymbolicTransition>& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  int d_k = data.empty() || data.front().pre.unary.empty()
                ? 0
                : static_cast<int>(data.front().pre.unary.front().size());
  int heads = data.empty() ? 0 : static_cast<int>(data.front().pre.rel.size());
  ordered_json header{{"format", "relsym-symbolic"},
                      {"version", 1},
                      {"d_k", d_k},
                      {"n_heads", heads},
                      {"n_samples", data.size()}};
  out << header.dump() << "\n";
  for (const auto& st : data) {
    ordered_json rec{{"ids", st.pre.ids},
                     {"action",
                      {{"pick", st.action.pick},
                       {"grasp", sim::to_string(st.action.grasp)},
                       {"place", st.action.place},
                       {"release", sim::to_string(st.action.release)}}},
                     {"pre", state_to_json(st.pre)},
                     {"post", state_to_json(st.post)}};
    out << rec.dump() << "\n";
  }
}

std::vector<SymbolicTransition> load_symbolic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty symbolic file: " + path);
  ordered_json header = ordered_json::parse(line);
  if (header.at("format") != "relsym-symbolic")
    throw std::runtime_error("not a relsym symbolic dataset: " + path);

  std::vector<SymbolicTransition> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json rec = ordered_json::parse(line);
    SymbolicTransition st;
    auto ids = rec.at("ids").get<std::vector<sim::ObjectId>>();
    st.pre = state_from_json(rec.at("pre"), ids);
    st.post = state_from_json(rec.at("post"), ids);
    const auto& a = rec.at("action");
    st.action.pick = a.at("pick").get<sim::ObjectId>();
    st.action.grasp = sim::side_from_string(a.at("grasp").get<std::string>());
    st.action.place = a.at("place").get<sim::ObjectId>();
    st.action.release = sim::side_from_string(a.at("release").get<std::string>());
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace relsym::sym

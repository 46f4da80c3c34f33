#include "relsym/induce/operators.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace relsym::induce {

std::string var_name(VarId v) { return std::string("?") + char('a' + v); }

std::optional<VarId> var_from_name(const std::string& name) {
  if (name.size() != 2 || name[0] != '?' || name[1] < 'a' || name[1] > 'z')
    return std::nullopt;
  return name[1] - 'a';
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string LiftedKey::serialize() const {
  std::ostringstream out;
  out << "g" << static_cast<int>(grasp) << ";r" << static_cast<int>(release) << ";p"
      << (has_place ? 1 : 0) << ";n" << n_vars << ";U";
  for (const auto& bits : unary) {
    for (int b : bits) out << b;
    out << '|';
  }
  for (std::size_t h = 0; h < rel.size(); ++h) {
    out << ";R" << h << ':';
    for (Eigen::Index i = 0; i < rel[h].rows(); ++i) {
      for (Eigen::Index j = 0; j < rel[h].cols(); ++j) out << rel[h](i, j);
      out << '|';
    }
  }
  return out.str();
}

std::string LiftedEffects::serialize() const {
  std::ostringstream out;
  for (const auto& f : unary)
    out << "u" << f.var << '.' << f.bit << ':' << f.from << f.to << ';';
  for (const auto& f : rel)
    out << "r" << f.head << '.' << f.src << '.' << f.dst << ':' << f.from << f.to << ';';
  return out.str();
}

std::string LiftedOperator::name() const {
  if (!name_override.empty()) return name_override;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(key.serialize())));
  return "pick-place_" + sim::to_string(key.grasp) + "_" + sim::to_string(key.release) +
         "__k" + std::string(hash, 12);
}

namespace {

// Key content under a given labeling: order[v] = record-local object index.
LiftedKey key_under(const sym::SymbolicTransition& t, const std::vector<int>& order,
                    bool has_place) {
  const int n = static_cast<int>(order.size());
  LiftedKey key;
  key.grasp = t.action.grasp;
  key.release = t.action.release;
  key.has_place = has_place;
  key.n_vars = n;
  key.unary.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) key.unary[std::size_t(v)] = t.pre.unary[std::size_t(order[v])];
  key.rel.resize(t.pre.rel.size());
  for (std::size_t h = 0; h < t.pre.rel.size(); ++h) {
    key.rel[h].resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        key.rel[h](i, j) = t.pre.rel[h](order[std::size_t(i)], order[std::size_t(j)]);
  }
  return key;
}

// The post-state pattern under a labeling, used only for tie-breaking between
// symmetric labelings that produce the same key.
std::string post_pattern(const sym::SymbolicTransition& t, const std::vector<int>& order) {
  std::ostringstream out;
  for (int v : order) {
    for (int b : t.post.unary[std::size_t(v)]) out << b;
    out << '|';
  }
  for (std::size_t h = 0; h < t.post.rel.size(); ++h) {
    for (int i : order) {
      for (int j : order) out << t.post.rel[h](i, j);
      out << '|';
    }
  }
  return out.str();
}

int index_of(const std::vector<sim::ObjectId>& ids, sim::ObjectId id) {
  auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

}  // namespace

std::pair<LiftedKey, Substitution> canonicalize(const sym::SymbolicTransition& t) {
  const int n = static_cast<int>(t.pre.ids.size());
  if (n < 1) throw sim::ContractViolation("canonicalize: empty record");
  if (n > kMaxVariables + 2)
    throw sim::ContractViolation("canonicalize: record exceeds the variable cap");

  const int pick = index_of(t.pre.ids, t.action.pick);
  if (pick < 0) throw sim::ContractViolation("canonicalize: pick object missing from record");
  int place = index_of(t.pre.ids, t.action.place);
  const bool has_place = place >= 0;

  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (i != pick && i != place) rest.push_back(i);
  std::sort(rest.begin(), rest.end());

  std::vector<int> base;
  base.push_back(pick);
  if (has_place) base.push_back(place);

  std::string best_key, best_post;
  std::vector<int> best_order;
  std::vector<int> perm = rest;
  do {
    std::vector<int> order = base;
    order.insert(order.end(), perm.begin(), perm.end());
    LiftedKey key = key_under(t, order, has_place);
    std::string ks = key.serialize();
    if (best_order.empty() || ks < best_key) {
      best_key = ks;
      best_post = post_pattern(t, order);
      best_order = order;
    } else if (ks == best_key) {
      std::string ps = post_pattern(t, order);
      if (ps < best_post) {
        best_post = ps;
        best_order = order;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Substitution theta;
  for (int idx : best_order) theta.to_object.push_back(t.pre.ids[std::size_t(idx)]);
  return {key_under(t, best_order, has_place), theta};
}

std::vector<Group> group_samples(const std::vector<sym::SymbolicTransition>& transitions) {
  std::map<std::string, Group> by_key;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    auto [key, theta] = canonicalize(transitions[i]);
    auto [it, fresh] = by_key.try_emplace(key.serialize());
    if (fresh) it->second.key = key;
    it->second.members.push_back({static_cast<int>(i), theta});
  }
  std::vector<Group> out;
  out.reserve(by_key.size());
  for (auto& [ks, group] : by_key) out.push_back(std::move(group));
  return out;
}

namespace {

LiftedEffects effects_under(const sym::SymbolicTransition& t, const Substitution& theta) {
  LiftedEffects eff;
  const int n = theta.arity();
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) idx[std::size_t(v)] = index_of(t.pre.ids, theta.to_object[std::size_t(v)]);

  for (int v = 0; v < n; ++v) {
    const auto& pre = t.pre.unary[std::size_t(idx[std::size_t(v)])];
    const auto& post = t.post.unary[std::size_t(idx[std::size_t(v)])];
    for (std::size_t b = 0; b < pre.size(); ++b)
      if (pre[b] != post[b]) eff.unary.push_back({v, static_cast<int>(b), pre[b], post[b]});
  }
  for (std::size_t h = 0; h < t.pre.rel.size(); ++h)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        int from = t.pre.rel[h](idx[std::size_t(u)], idx[std::size_t(v)]);
        int to = t.post.rel[h](idx[std::size_t(u)], idx[std::size_t(v)]);
        if (from != to) eff.rel.push_back({static_cast<int>(h), u, v, from, to});
      }
  std::sort(eff.unary.begin(), eff.unary.end());
  std::sort(eff.rel.begin(), eff.rel.end());
  return eff;
}

}  // namespace

EffectChoice lifted_effects(const Group& group,
                            const std::vector<sym::SymbolicTransition>& transitions) {
  if (group.members.empty()) throw sim::ContractViolation("lifted_effects: empty group");
  std::map<std::string, std::pair<int, LiftedEffects>> freq;
  for (const auto& [idx, theta] : group.members) {
    LiftedEffects eff = effects_under(transitions[std::size_t(idx)], theta);
    auto [it, fresh] = freq.try_emplace(eff.serialize(), 0, eff);
    ++it->second.first;
  }
  // Modal effect; the map order makes equal counts resolve lexicographically.
  const std::pair<int, LiftedEffects>* best = nullptr;
  for (const auto& [ser, entry] : freq)
    if (!best || entry.first > best->first) best = &entry;
  EffectChoice choice;
  choice.effects = best->second;
  choice.conflict_ratio = double(best->first) / double(group.members.size());
  return choice;
}

InduceResult induce_operators(const std::vector<sym::SymbolicTransition>& transitions,
                              int min_support) {
  InduceResult result;
  std::vector<sym::SymbolicTransition> usable;
  usable.reserve(transitions.size());
  for (const auto& t : transitions) {
    if (static_cast<int>(t.pre.ids.size()) > kMaxVariables)
      ++result.skipped_oversize;
    else
      usable.push_back(t);
  }

  std::vector<Group> groups = group_samples(usable);
  for (const auto& group : groups) {
    if (static_cast<int>(group.members.size()) < min_support) continue;
    EffectChoice choice = lifted_effects(group, usable);
    LiftedOperator op;
    op.key = group.key;
    op.effects = choice.effects;
    op.support = static_cast<int>(group.members.size());
    op.conflict_ratio = choice.conflict_ratio;
    result.operators.push_back(std::move(op));
  }
  std::sort(result.operators.begin(), result.operators.end(),
            [](const LiftedOperator& a, const LiftedOperator& b) {
              if (a.support != b.support) return a.support > b.support;
              return a.key.serialize() < b.key.serialize();
            });
  return result;
}

sym::SymbolicState apply_operator(const sym::SymbolicState& state, const LiftedOperator& op,
                                  const Substitution& theta) {
  if (theta.arity() != op.key.n_vars)
    throw sim::ContractViolation("apply_operator: substitution arity mismatch");

  std::vector<int> idx(static_cast<std::size_t>(theta.arity()));
  for (int v = 0; v < theta.arity(); ++v) {
    int i = index_of(state.ids, theta.to_object[std::size_t(v)]);
    if (i < 0) throw sim::ContractViolation("apply_operator: object missing from state");
    idx[std::size_t(v)] = i;
  }

  for (int v = 0; v < op.key.n_vars; ++v)
    if (state.unary[std::size_t(idx[std::size_t(v)])] != op.key.unary[std::size_t(v)])
      throw InapplicableOperator("unary precondition fails at " + var_name(v));
  for (std::size_t h = 0; h < op.key.rel.size(); ++h)
    for (int u = 0; u < op.key.n_vars; ++u)
      for (int v = 0; v < op.key.n_vars; ++v)
        if (state.rel[h](idx[std::size_t(u)], idx[std::size_t(v)]) != op.key.rel[h](u, v))
          throw InapplicableOperator("relational precondition fails at head " +
                                     std::to_string(h));

  sym::SymbolicState next = state;
  for (const auto& f : op.effects.unary)
    next.unary[std::size_t(idx[std::size_t(f.var)])][std::size_t(f.bit)] = f.to;
  for (const auto& f : op.effects.rel)
    next.rel[std::size_t(f.head)](idx[std::size_t(f.src)], idx[std::size_t(f.dst)]) = f.to;
  return next;
}

void save_operators(const std::string& path, const std::vector<LiftedOperator>& ops) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "relsym-operators v1\n";
  out << "count " << ops.size() << "\n";
  out << "heads " << (ops.empty() ? 0 : ops.front().key.rel.size()) << "\n";
  for (const auto& op : ops) {
    out << "op " << op.name() << "\n";
    out << "  support " << op.support << "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", op.conflict_ratio);
    out << "  conflict " << buf << "\n";
    out << "  vars";
    for (int v = 0; v < op.key.n_vars; ++v) out << " " << var_name(v);
    out << "\n";
    out << "  action pick ?a grasp " << sim::to_string(op.key.grasp);
    if (op.key.has_place) out << " place ?b";
    out << " release " << sim::to_string(op.key.release) << "\n";
    for (int v = 0; v < op.key.n_vars; ++v) {
      out << "  pre unary " << var_name(v);
      for (int b : op.key.unary[std::size_t(v)]) out << " " << b;
      out << "\n";
    }
    for (std::size_t h = 0; h < op.key.rel.size(); ++h)
      for (int u = 0; u < op.key.n_vars; ++u)
        for (int v = 0; v < op.key.n_vars; ++v)
          if (op.key.rel[h](u, v))
            out << "  pre rel " << h << " " << var_name(u) << " " << var_name(v) << "\n";
    for (const auto& f : op.effects.unary)
      out << "  eff unary " << var_name(f.var) << " " << f.bit << " " << f.from << " "
          << f.to << "\n";
    for (const auto& f : op.effects.rel)
      out << "  eff rel " << f.head << " " << var_name(f.src) << " " << var_name(f.dst)
          << " " << f.from << " " << f.to << "\n";
    out << "end\n";
  }
}

std::vector<LiftedOperator> load_operators(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "relsym-operators v1")
    throw std::runtime_error("not a relsym operator file: " + path);

  std::vector<LiftedOperator> ops;
  LiftedOperator cur;
  int n_heads = 0;
  bool in_op = false;
  auto head_count = [&](int h) {
    if (h >= n_heads) throw std::runtime_error("operator file: relation head out of range");
  };

  // First pass records everything; relation matrices are sized afterwards.
  struct PendingRel {
    int head, u, v;
  };
  std::vector<PendingRel> pending;

  auto flush = [&]() {
    cur.key.rel.assign(static_cast<std::size_t>(n_heads),
                       Eigen::MatrixXi::Zero(cur.key.n_vars, cur.key.n_vars));
    for (const auto& p : pending) cur.key.rel[std::size_t(p.head)](p.u, p.v) = 1;
    ops.push_back(cur);
    cur = LiftedOperator{};
    pending.clear();
  };

  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "count" || tok.empty()) continue;
    if (tok == "heads") {
      ls >> n_heads;
      continue;
    }
    if (tok == "op") {
      in_op = true;
      continue;
    }
    if (tok == "end") {
      flush();
      in_op = false;
      continue;
    }
    if (!in_op) continue;
    if (tok == "support") ls >> cur.support;
    else if (tok == "conflict") ls >> cur.conflict_ratio;
    else if (tok == "vars") {
      std::string v;
      int count = 0;
      while (ls >> v) ++count;
      cur.key.n_vars = count;
      cur.key.unary.assign(static_cast<std::size_t>(count), {});
    } else if (tok == "action") {
      std::string w;
      cur.key.has_place = false;
      while (ls >> w) {
        if (w == "grasp") {
          ls >> w;
          cur.key.grasp = sim::side_from_string(w);
        } else if (w == "release") {
          ls >> w;
          cur.key.release = sim::side_from_string(w);
        } else if (w == "place") {
          ls >> w;
          cur.key.has_place = true;
        }
      }
    } else if (tok == "pre") {
      std::string kind;
      ls >> kind;
      if (kind == "unary") {
        std::string v;
        ls >> v;
        auto var = var_from_name(v);
        if (!var) throw std::runtime_error("operator file: bad variable " + v);
        int bit;
        while (ls >> bit) cur.key.unary[std::size_t(*var)].push_back(bit);
      } else {
        int h;
        std::string u, v;
        ls >> h >> u >> v;
        head_count(h);
        pending.push_back({h, *var_from_name(u), *var_from_name(v)});
      }
    } else if (tok == "eff") {
      std::string kind;
      ls >> kind;
      if (kind == "unary") {
        std::string v;
        UnaryFlip f{};
        ls >> v >> f.bit >> f.from >> f.to;
        f.var = *var_from_name(v);
        cur.effects.unary.push_back(f);
      } else {
        RelFlip f{};
        std::string u, v;
        ls >> f.head >> u >> v >> f.from >> f.to;
        head_count(f.head);
        f.src = *var_from_name(u);
        f.dst = *var_from_name(v);
        cur.effects.rel.push_back(f);
      }
    }
  }
  return ops;
}

}  // namespace relsym::induce

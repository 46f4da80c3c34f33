#include "relsym/pddl/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace relsym::pddl {

namespace {

std::string unary_pred(int bit, int value) {
  return (value ? "p" : "not_p") + std::to_string(bit);
}

std::string rel_pred(int head) { return "r" + std::to_string(head); }

void check_var(const induce::LiftedOperator& op, induce::VarId v) {
  if (v < 0 || v >= op.key.n_vars)
    throw EmitError("operator " + op.name() + " references variable outside its parameters");
}

void emit_precondition(std::ostringstream& out, const induce::LiftedKey& key) {
  out << "(and";
  for (int v = 0; v < key.n_vars; ++v)
    for (std::size_t b = 0; b < key.unary[std::size_t(v)].size(); ++b)
      out << " (" << unary_pred(static_cast<int>(b), key.unary[std::size_t(v)][b]) << " "
          << induce::var_name(v) << ")";
  for (std::size_t h = 0; h < key.rel.size(); ++h)
    for (int u = 0; u < key.n_vars; ++u)
      for (int v = 0; v < key.n_vars; ++v)
        if (key.rel[h](u, v))
          out << " (" << rel_pred(static_cast<int>(h)) << " " << induce::var_name(u) << " "
              << induce::var_name(v) << ")";
  out << ")";
}

void emit_effects(std::ostringstream& out, const induce::LiftedOperator& op) {
  out << "(and";
  for (const auto& f : op.effects.unary) {
    check_var(op, f.var);
    out << " (" << unary_pred(f.bit, f.to) << " " << induce::var_name(f.var) << ")";
    out << " (not (" << unary_pred(f.bit, f.from) << " " << induce::var_name(f.var) << "))";
  }
  for (const auto& f : op.effects.rel) {
    check_var(op, f.src);
    check_var(op, f.dst);
    if (f.to)
      out << " (" << rel_pred(f.head) << " " << induce::var_name(f.src) << " "
          << induce::var_name(f.dst) << ")";
    else
      out << " (not (" << rel_pred(f.head) << " " << induce::var_name(f.src) << " "
          << induce::var_name(f.dst) << "))";
  }
  out << ")";
}

}  // namespace

std::string emit_domain(const std::vector<induce::LiftedOperator>& ops,
                        const std::string& domain_name) {
  if (ops.empty()) throw EmitError("emit_domain: empty operator list");
  const int d_k = static_cast<int>(ops.front().key.unary.empty()
                                       ? 0
                                       : ops.front().key.unary.front().size());
  const int heads = static_cast<int>(ops.front().key.rel.size());
  for (const auto& op : ops) {
    if (static_cast<int>(op.key.rel.size()) != heads ||
        (op.key.n_vars > 0 &&
         static_cast<int>(op.key.unary.front().size()) != d_k))
      throw EmitError("emit_domain: operators disagree on symbol dimensions");
  }

  std::ostringstream out;
  out << "(define (domain " << domain_name << ")\n";
  out << "  (:requirements :strips)\n";
  out << "  (:predicates";
  for (int b = 0; b < d_k; ++b)
    out << " (p" << b << " ?x) (not_p" << b << " ?x)";
  for (int h = 0; h < heads; ++h) out << " (r" << h << " ?x ?y)";
  out << ")\n";

  for (const auto& op : ops) {
    out << "  (:action " << op.name() << "\n";
    out << "    :parameters (";
    for (int v = 0; v < op.key.n_vars; ++v)
      out << (v ? " " : "") << induce::var_name(v);
    out << ")\n";
    std::ostringstream pre, eff;
    emit_precondition(pre, op.key);
    emit_effects(eff, op);
    out << "    :precondition " << pre.str() << "\n";
    out << "    :effect " << eff.str() << "\n";
    out << "  )\n";
  }
  out << ")\n";
  return out.str();
}

std::string emit_problem(const sym::SymbolicState& init, const sym::SymbolicState& goal,
                         const sim::ContactSet& goal_contacts,
                         const std::string& problem_name, const std::string& domain_name) {
  for (sim::ObjectId id : goal.ids)
    if (std::find(init.ids.begin(), init.ids.end(), id) == init.ids.end())
      throw EmitError("emit_problem: goal references unknown object " + object_name(id));

  std::ostringstream out;
  out << "(define (problem " << problem_name << ")\n";
  out << "  (:domain " << domain_name << ")\n";
  out << "  (:objects";
  for (sim::ObjectId id : init.ids) out << " " << object_name(id);
  out << ")\n";

  out << "  (:init";
  for (std::size_t i = 0; i < init.ids.size(); ++i)
    for (std::size_t b = 0; b < init.unary[i].size(); ++b)
      out << " (" << unary_pred(static_cast<int>(b), init.unary[i][b]) << " "
          << object_name(init.ids[i]) << ")";
  for (std::size_t h = 0; h < init.rel.size(); ++h)
    for (Eigen::Index i = 0; i < init.rel[h].rows(); ++i)
      for (Eigen::Index j = 0; j < init.rel[h].cols(); ++j)
        if (init.rel[h](i, j))
          out << " (r" << h << " " << object_name(init.ids[std::size_t(i)]) << " "
              << object_name(init.ids[std::size_t(j)]) << ")";
  out << ")\n";

  out << "  (:goal (and";
  for (std::size_t i = 0; i < goal.ids.size(); ++i)
    for (std::size_t b = 0; b < goal.unary[i].size(); ++b)
      out << " (" << unary_pred(static_cast<int>(b), goal.unary[i][b]) << " "
          << object_name(goal.ids[i]) << ")";
  for (std::size_t h = 0; h < goal.rel.size(); ++h)
    for (Eigen::Index i = 0; i < goal.rel[h].rows(); ++i)
      for (Eigen::Index j = 0; j < goal.rel[h].cols(); ++j) {
        if (!goal.rel[h](i, j)) continue;
        sim::ObjectId a = goal.ids[std::size_t(i)], b = goal.ids[std::size_t(j)];
        if (!goal_contacts.count({std::min(a, b), std::max(a, b)})) continue;
        out << " (r" << h << " " << object_name(a) << " " << object_name(b) << ")";
      }
  out << "))\n";
  out << ")\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum Kind { LParen, RParen, Symbol, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Token::End;
      return t;
    }
    char c = text_[pos_];
    if (c == '(') {
      advance();
      t.kind = Token::LParen;
      return t;
    }
    if (c == ')') {
      advance();
      t.kind = Token::RParen;
      return t;
    }
    t.kind = Token::Symbol;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      t.text += text_[pos_];
      advance();
    }
    return t;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { shift(); }

  void expect_lparen() {
    if (cur_.kind != Token::LParen) fail("expected '('");
    shift();
  }
  void expect_rparen() {
    if (cur_.kind != Token::RParen) fail("expected ')'");
    shift();
  }
  std::string expect_symbol() {
    if (cur_.kind != Token::Symbol) fail("expected a symbol");
    std::string s = cur_.text;
    shift();
    return s;
  }
  void expect_keyword(const std::string& kw) {
    std::string s = expect_symbol();
    if (s != kw) fail("expected " + kw + ", got " + s);
  }
  bool at_lparen() const { return cur_.kind == Token::LParen; }
  bool at_rparen() const { return cur_.kind == Token::RParen; }
  bool at_symbol(const std::string& s) const {
    return cur_.kind == Token::Symbol && cur_.text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur_.line, cur_.col);
  }

  Atom parse_atom() {
    expect_lparen();
    Atom a;
    a.pred = expect_symbol();
    while (cur_.kind == Token::Symbol) a.args.push_back(expect_symbol());
    expect_rparen();
    return a;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  Lexer lexer_;
  Token cur_;
};

struct PredicateTable {
  int d_k = 0;
  int heads = 0;

  // -1: unknown predicate. Returns arity.
  int arity(const std::string& pred) const {
    if (pred.rfind("not_p", 0) == 0 || pred[0] == 'p') return 1;
    if (pred[0] == 'r') return 2;
    return -1;
  }

  bool declared(const std::string& pred) const {
    if (pred.rfind("not_p", 0) == 0) return index_ok(pred.substr(5), d_k);
    if (pred[0] == 'p') return index_ok(pred.substr(1), d_k);
    if (pred[0] == 'r') return index_ok(pred.substr(1), heads);
    return false;
  }

  static bool index_ok(const std::string& digits, int limit) {
    if (digits.empty()) return false;
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    int v = std::stoi(digits);
    return v >= 0 && v < limit;
  }
};

// "pick-place_center_right__k<hash>" or "pick_center_right__k<hash>"
void parse_action_name(Parser& p, const std::string& name, induce::LiftedKey& key) {
  std::string base = name.substr(0, name.find("__k"));
  std::vector<std::string> parts;
  std::istringstream ss(base);
  std::string part;
  while (std::getline(ss, part, '_')) parts.push_back(part);
  if (parts.size() != 3 || (parts[0] != "pick-place" && parts[0] != "pick"))
    p.fail("unrecognized action name " + name);
  key.has_place = parts[0] == "pick-place";
  key.grasp = sim::side_from_string(parts[1]);
  key.release = sim::side_from_string(parts[2]);
}

induce::VarId var_or_fail(Parser& p, const PredicateTable&, const std::string& name,
                          int n_vars) {
  auto v = induce::var_from_name(name);
  if (!v || *v >= n_vars) p.fail("unknown variable " + name);
  return *v;
}

void atom_check(Parser& p, const PredicateTable& preds, const Atom& a) {
  if (!preds.declared(a.pred)) p.fail("unknown predicate " + a.pred);
  if (static_cast<int>(a.args.size()) != preds.arity(a.pred))
    p.fail("arity mismatch for " + a.pred);
}

}  // namespace

std::vector<induce::LiftedOperator> parse_domain(const std::string& text) {
  Parser p(text);
  p.expect_lparen();
  p.expect_keyword("define");
  p.expect_lparen();
  p.expect_keyword("domain");
  p.expect_symbol();  // domain name
  p.expect_rparen();

  p.expect_lparen();
  p.expect_keyword(":requirements");
  p.expect_keyword(":strips");
  p.expect_rparen();

  PredicateTable preds;
  p.expect_lparen();
  p.expect_keyword(":predicates");
  while (p.at_lparen()) {
    Atom decl = p.parse_atom();
    if (decl.pred[0] == 'p' && decl.pred.rfind("not_p", 0) != 0)
      preds.d_k = std::max(preds.d_k, std::stoi(decl.pred.substr(1)) + 1);
    else if (decl.pred[0] == 'r')
      preds.heads = std::max(preds.heads, std::stoi(decl.pred.substr(1)) + 1);
  }
  p.expect_rparen();

  std::vector<induce::LiftedOperator> ops;
  while (p.at_lparen()) {
    p.expect_lparen();
    p.expect_keyword(":action");
    induce::LiftedOperator op;
    std::string name = p.expect_symbol();
    op.name_override = name;
    parse_action_name(p, name, op.key);

    p.expect_keyword(":parameters");
    p.expect_lparen();
    int n_vars = 0;
    while (!p.at_rparen()) {
      std::string v = p.expect_symbol();
      auto var = induce::var_from_name(v);
      if (!var || *var != n_vars) p.fail("parameters must be ?a ?b ... in order");
      ++n_vars;
    }
    p.expect_rparen();
    op.key.n_vars = n_vars;
    op.key.unary.assign(std::size_t(n_vars), std::vector<int>(std::size_t(preds.d_k), -1));
    op.key.rel.assign(std::size_t(preds.heads), Eigen::MatrixXi::Zero(n_vars, n_vars));

    p.expect_keyword(":precondition");
    p.expect_lparen();
    p.expect_keyword("and");
    while (p.at_lparen()) {
      Atom a = p.parse_atom();
      atom_check(p, preds, a);
      if (a.pred[0] == 'r') {
        int h = std::stoi(a.pred.substr(1));
        induce::VarId u = var_or_fail(p, preds, a.args[0], n_vars);
        induce::VarId v = var_or_fail(p, preds, a.args[1], n_vars);
        op.key.rel[std::size_t(h)](u, v) = 1;
      } else {
        bool positive = a.pred.rfind("not_p", 0) != 0;
        int bit = std::stoi(a.pred.substr(positive ? 1 : 5));
        induce::VarId v = var_or_fail(p, preds, a.args[0], n_vars);
        int& slot = op.key.unary[std::size_t(v)][std::size_t(bit)];
        if (slot != -1) p.fail("duplicate unary literal for " + a.args[0]);
        slot = positive ? 1 : 0;
      }
    }
    p.expect_rparen();
    for (int v = 0; v < n_vars; ++v)
      for (int b = 0; b < preds.d_k; ++b)
        if (op.key.unary[std::size_t(v)][std::size_t(b)] == -1)
          p.fail("missing unary literal for " + induce::var_name(v) + " bit " +
                 std::to_string(b));

    p.expect_keyword(":effect");
    p.expect_lparen();
    p.expect_keyword("and");
    std::vector<Atom> adds;
    std::vector<Atom> dels;
    while (p.at_lparen()) {
      p.expect_lparen();
      if (p.at_symbol("not")) {
        p.expect_keyword("not");
        Atom a = p.parse_atom();
        atom_check(p, preds, a);
        dels.push_back(a);
        p.expect_rparen();
      } else {
        Atom a;
        a.pred = p.expect_symbol();
        while (!p.at_rparen()) a.args.push_back(p.expect_symbol());
        p.expect_rparen();
        atom_check(p, preds, a);
        adds.push_back(a);
      }
    }
    p.expect_rparen();

    // Reassemble flips: unary adds pair with deletes of the dual predicate.
    for (const Atom& a : adds) {
      if (a.pred[0] == 'r') {
        int h = std::stoi(a.pred.substr(1));
        op.effects.rel.push_back({h, var_or_fail(p, preds, a.args[0], n_vars),
                                  var_or_fail(p, preds, a.args[1], n_vars), 0, 1});
      } else {
        bool positive = a.pred.rfind("not_p", 0) != 0;
        int bit = std::stoi(a.pred.substr(positive ? 1 : 5));
        induce::VarId v = var_or_fail(p, preds, a.args[0], n_vars);
        Atom dual{unary_pred(bit, positive ? 0 : 1), {a.args[0]}};
        if (std::find(dels.begin(), dels.end(), dual) == dels.end())
          p.fail("unary effect without its dual delete for " + a.args[0]);
        op.effects.unary.push_back({v, bit, positive ? 0 : 1, positive ? 1 : 0});
      }
    }
    for (const Atom& a : dels) {
      if (a.pred[0] != 'r') continue;  // unary deletes were consumed above
      int h = std::stoi(a.pred.substr(1));
      op.effects.rel.push_back({h, var_or_fail(p, preds, a.args[0], n_vars),
                                var_or_fail(p, preds, a.args[1], n_vars), 1, 0});
    }
    std::sort(op.effects.unary.begin(), op.effects.unary.end());
    std::sort(op.effects.rel.begin(), op.effects.rel.end());

    p.expect_rparen();  // close :action
    ops.push_back(std::move(op));
  }
  p.expect_rparen();  // close define
  return ops;
}

ProblemData parse_problem(const std::string& text) {
  Parser p(text);
  ProblemData data;
  p.expect_lparen();
  p.expect_keyword("define");
  p.expect_lparen();
  p.expect_keyword("problem");
  data.name = p.expect_symbol();
  p.expect_rparen();

  p.expect_lparen();
  p.expect_keyword(":domain");
  data.domain = p.expect_symbol();
  p.expect_rparen();

  p.expect_lparen();
  p.expect_keyword(":objects");
  while (!p.at_rparen()) data.objects.push_back(p.expect_symbol());
  p.expect_rparen();

  p.expect_lparen();
  p.expect_keyword(":init");
  while (p.at_lparen()) data.init.push_back(p.parse_atom());
  p.expect_rparen();

  p.expect_lparen();
  p.expect_keyword(":goal");
  p.expect_lparen();
  p.expect_keyword("and");
  while (p.at_lparen()) data.goal.push_back(p.parse_atom());
  p.expect_rparen();
  p.expect_rparen();

  p.expect_rparen();
  return data;
}

std::vector<std::pair<std::string, std::vector<std::string>>> parse_plan_lines(
    const std::string& text) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto l = line.find('(');
    auto r = line.rfind(')');
    if (l == std::string::npos || r == std::string::npos || r <= l) continue;
    std::istringstream body(line.substr(l + 1, r - l - 1));
    std::string name;
    if (!(body >> name)) continue;
    std::vector<std::string> args;
    std::string a;
    while (body >> a) args.push_back(a);
    out.push_back({name, args});
  }
  return out;
}

}  // namespace relsym::pddl

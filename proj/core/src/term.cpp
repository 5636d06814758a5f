#include "signlp/term.hpp"

#include <algorithm>
#include <sstream>

namespace signlp::logic {

bool Term::ground() const {
  switch (kind) {
    case Kind::Var:
      return false;
    case Kind::Const:
      return true;
    case Kind::Compound:
      return std::all_of(args.begin(), args.end(),
                         [](const Term& t) { return t.ground(); });
  }
  return false;
}

bool Atom::ground() const {
  return std::all_of(args.begin(), args.end(),
                     [](const Term& t) { return t.ground(); });
}

static void write_term(std::ostringstream& os, const Term& t) {
  os << t.name;
  if (t.is_compound()) {
    os << '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) os << ',';
      write_term(os, t.args[i]);
    }
    os << ')';
  }
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  write_term(os, t);
  return os.str();
}

std::string to_string(const Atom& a) {
  std::ostringstream os;
  os << a.pred;
  if (!a.args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) os << ',';
      write_term(os, a.args[i]);
    }
    os << ')';
  }
  return os.str();
}

std::string to_string(const Clause& c) {
  std::ostringstream os;
  os << to_string(c.head);
  if (!c.body.empty()) {
    os << " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) os << ", ";
      os << to_string(c.body[i]);
    }
  }
  os << '.';
  return os.str();
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
  } else if (t.is_compound()) {
    for (const Term& a : t.args) collect_vars(a, out);
  }
}

void collect_vars(const Atom& a, std::vector<std::string>& out) {
  for (const Term& t : a.args) collect_vars(t, out);
}

void collect_vars(const Clause& c, std::vector<std::string>& out) {
  collect_vars(c.head, out);
  for (const Atom& a : c.body) collect_vars(a, out);
}

namespace {

std::string nth_var_name(std::size_t i) {
  std::string name(1, static_cast<char>('A' + i % 26));
  if (i >= 26) name += std::to_string(i / 26);
  return name;
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& m) {
  if (t.is_var()) return Term::var(m.at(t.name));
  if (t.is_const()) return t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(rename_term(a, m));
  return Term::compound(t.name, std::move(args));
}

Atom rename_atom(const Atom& a, const std::map<std::string, std::string>& m) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(rename_term(t, m));
  return out;
}

}  // namespace

Clause canonicalize_vars(const Clause& c) {
  std::vector<std::string> vars;
  collect_vars(c, vars);
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = nth_var_name(i);
  Clause out;
  out.head = rename_atom(c.head, m);
  out.body.reserve(c.body.size());
  for (const Atom& a : c.body) out.body.push_back(rename_atom(a, m));
  return out;
}

bool alpha_equivalent(const Clause& a, const Clause& b) {
  return canonicalize_vars(a) == canonicalize_vars(b);
}

void Program::add(Clause c) {
  const std::size_t idx = clauses_.size();
  PredKey key{c.head.pred, c.head.arity()};
  auto it = by_pred_.find(key);
  if (it == by_pred_.end()) {
    pred_order_.push_back(key);
    by_pred_[key] = {idx};
    facts_only_[key] = c.is_fact() && c.head.ground();
  } else {
    it->second.push_back(idx);
    facts_only_[key] = facts_only_[key] && c.is_fact() && c.head.ground();
  }
  if (c.is_fact() && c.head.ground() && !c.head.args.empty() &&
      c.head.args[0].is_const()) {
    fact_index_[{c.head.pred, c.head.arity(), c.head.args[0].name}].push_back(idx);
  }
  clauses_.push_back(std::move(c));
}

void Program::add_all(const std::vector<Clause>& cs) {
  for (const Clause& c : cs) add(c);
}

std::vector<std::size_t> Program::candidates(const Atom& goal) const {
  PredKey key{goal.pred, goal.arity()};
  auto it = by_pred_.find(key);
  if (it == by_pred_.end()) return {};
  if (!goal.args.empty() && goal.args[0].is_const()) {
    auto fo = facts_only_.find(key);
    if (fo != facts_only_.end() && fo->second) {
      auto fit = fact_index_.find({goal.pred, goal.arity(), goal.args[0].name});
      if (fit == fact_index_.end()) return {};
      return fit->second;
    }
  }
  return it->second;
}

bool Program::has_fact(const Atom& a) const {
  for (std::size_t i : candidates(a)) {
    if (clauses_[i].is_fact() && clauses_[i].head == a) return true;
  }
  return false;
}

}  // namespace signlp::logic

#include "signlp/unify.hpp"

#include <cassert>

namespace signlp::logic {

void Subst::bind(const std::string& var, Term t) {
  assert(!(t.is_var() && t.name == var));
  b_.emplace(var, std::move(t));
}

const Term& Subst::walk(const Term& t) const {
  const Term* cur = &t;
  while (cur->is_var()) {
    auto it = b_.find(cur->name);
    if (it == b_.end()) break;
    cur = &it->second;
  }
  return *cur;
}

Term Subst::apply(const Term& t) const {
  const Term& w = walk(t);
  if (!w.is_compound()) return w;
  std::vector<Term> args;
  args.reserve(w.args.size());
  for (const Term& a : w.args) args.push_back(apply(a));
  return Term::compound(w.name, std::move(args));
}

Atom Subst::apply(const Atom& a) const {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(apply(t));
  return out;
}

Clause Subst::apply(const Clause& c) const {
  Clause out;
  out.head = apply(c.head);
  out.body.reserve(c.body.size());
  for (const Atom& a : c.body) out.body.push_back(apply(a));
  return out;
}

Subst Subst::project(const std::vector<std::string>& vars) const {
  Subst out;
  for (const std::string& v : vars) {
    Term resolved = apply(Term::var(v));
    if (!(resolved.is_var() && resolved.name == v)) out.bind(v, std::move(resolved));
  }
  return out;
}

namespace {

bool occurs(const std::string& var, const Term& t, const Subst& s) {
  const Term& w = s.walk(t);
  if (w.is_var()) return w.name == var;
  if (w.is_compound()) {
    for (const Term& a : w.args)
      if (occurs(var, a, s)) return true;
  }
  return false;
}

bool unify_into(const Term& a, const Term& b, Subst& s) {
  const Term wa = s.walk(a);
  const Term wb = s.walk(b);
  if (wa.is_var()) {
    if (wb.is_var() && wb.name == wa.name) return true;
    if (occurs(wa.name, wb, s)) return false;
    s.bind(wa.name, wb);
    return true;
  }
  if (wb.is_var()) {
    if (occurs(wb.name, wa, s)) return false;
    s.bind(wb.name, wa);
    return true;
  }
  if (wa.kind != wb.kind || wa.name != wb.name) return false;
  if (wa.is_const()) return true;
  if (wa.args.size() != wb.args.size()) return false;
  for (std::size_t i = 0; i < wa.args.size(); ++i)
    if (!unify_into(wa.args[i], wb.args[i], s)) return false;
  return true;
}

}  // namespace

std::optional<Subst> unify(const Term& a, const Term& b, Subst s) {
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

std::optional<Subst> unify(const Atom& a, const Atom& b, Subst s) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return std::nullopt;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(a.args[i], b.args[i], s)) return std::nullopt;
  return s;
}

namespace {

Term rename_fresh(const Term& t, std::map<std::string, std::string>& m, long& counter) {
  if (t.is_var()) {
    auto it = m.find(t.name);
    if (it == m.end()) {
      it = m.emplace(t.name, "_" + std::to_string(counter++)).first;
    }
    return Term::var(it->second);
  }
  if (t.is_const()) return t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(rename_fresh(a, m, counter));
  return Term::compound(t.name, std::move(args));
}

}  // namespace

Clause standardize_apart(const Clause& c, long& counter) {
  std::map<std::string, std::string> m;
  Clause out;
  out.head.pred = c.head.pred;
  for (const Term& t : c.head.args) out.head.args.push_back(rename_fresh(t, m, counter));
  out.body.reserve(c.body.size());
  for (const Atom& a : c.body) {
    Atom ra{a.pred, {}};
    for (const Term& t : a.args) ra.args.push_back(rename_fresh(t, m, counter));
    out.body.push_back(std::move(ra));
  }
  return out;
}

}  // namespace signlp::logic
